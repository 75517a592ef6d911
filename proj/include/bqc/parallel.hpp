// Copyright 2026 The bqcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bqc {

/// Worker cap: BQC_THREADS if set (minimum 1), else hardware concurrency.
inline unsigned max_threads() {
    static const unsigned cached = [] {
        if (const char* env = std::getenv("BQC_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<unsigned>(v);
            return 1u;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1u;
    }();
    return cached;
}

/// Runs fn(i) for i in [0, count) across worker threads. Every index is
/// processed exactly once and fn must only write state owned by its index,
/// so the result is identical to the sequential loop.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(max_threads(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace bqc
