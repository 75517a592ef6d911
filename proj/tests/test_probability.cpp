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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "bqc/circuit.hpp"
#include "bqc/probability.hpp"
#include "helpers.hpp"

using namespace bqc;
using test::random_state;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector bell_state() {
    StateVector state(2);
    state.apply_single(gate_ry(kPi / 2), 0);
    state.apply_controlled(gate_x(), {{0, 1}}, 1);
    return state;
}

// Brute-force oracle: materialize the projector onto {indices with ancilla
// value lambda} as an explicit dense matrix, apply it to the state and take
// the squared norm.
double projector_prior_oracle(const StateVector& state, const RegisterSplit& split,
                              std::size_t lambda) {
    const std::size_t dim = state.dim();
    std::vector<std::vector<double>> projector(dim, std::vector<double>(dim, 0.0));
    const std::size_t latent_mask = split.latent_size() - 1;
    for (std::size_t z = 0; z < dim; ++z) {
        if ((z & latent_mask) == lambda) projector[z][z] = 1.0;
    }
    std::vector<Complex> projected(dim, Complex{0, 0});
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            projected[r] += projector[r][c] * state.amplitudes()[c];
        }
    }
    double norm2 = 0.0;
    for (const Complex& a : projected) norm2 += std::norm(a);
    return norm2;
}

}  // namespace

TEST_CASE("joint distribution of correlated and product states") {
    const RegisterSplit split{1, 1};
    const DiscreteDistribution bell = joint(bell_state(), split);
    CHECK(bell.probs[0] == doctest::Approx(0.5));
    CHECK(bell.probs[1] == doctest::Approx(0.0));
    CHECK(bell.probs[2] == doctest::Approx(0.0));
    CHECK(bell.probs[3] == doctest::Approx(0.5));

    // Exact prior only: P(x=0, lambda=i) = prior_i.
    const Circuit prep = embed_on_ancillas(build_prior_exact({0.7, 0.3}, 1), 1);
    const DiscreteDistribution with_prior = joint(run(prep, {}), split);
    CHECK(with_prior.probs[0] == doctest::Approx(0.7));
    CHECK(with_prior.probs[1] == doctest::Approx(0.3));
    CHECK(with_prior.probs[2] == doctest::Approx(0.0));
    CHECK(with_prior.probs[3] == doctest::Approx(0.0));

    const DiscreteDistribution initial = joint(StateVector(2), split);
    CHECK(initial.probs[0] == doctest::Approx(1.0));

    const RegisterSplit wrong{2, 1};
    CHECK_THROWS_AS(joint(bell_state(), wrong), std::invalid_argument);
}

TEST_CASE("prior marginalizes the data register away") {
    const RegisterSplit split{1, 1};
    const DiscreteDistribution bell = prior(bell_state(), split);
    CHECK(bell.probs[0] == doctest::Approx(0.5));
    CHECK(bell.probs[1] == doctest::Approx(0.5));

    const Circuit six = embed_on_ancillas(build_prior_exact(std::vector<double>(6, 1.0 / 6.0), 3), 2);
    const DiscreteDistribution uniform6 = prior(run(six, {}), {2, 3});
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(uniform6.probs[i] == doctest::Approx(i < 6 ? 1.0 / 6.0 : 0.0).epsilon(1e-10));
    }

    // Data-only gates leave the ancilla at |0>.
    StateVector product(3);
    product.apply_single(gate_ry(0.9), 0);
    product.apply_single(gate_rx(0.4), 1);
    const DiscreteDistribution untouched = prior(product, {2, 1});
    CHECK(untouched.probs[0] == doctest::Approx(1.0));
    CHECK(untouched.probs[1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(prior(product, {3, 0}), std::invalid_argument);
}

TEST_CASE("likelihood conditions on one latent") {
    const RegisterSplit split{1, 1};
    const DiscreteDistribution given1 = likelihood(bell_state(), split, 1);
    CHECK(given1.probs[0] == doctest::Approx(0.0));
    CHECK(given1.probs[1] == doctest::Approx(1.0));

    // Independent register: conditional equals the data marginal.
    StateVector uniform(2);
    uniform.apply_single(gate_ry(kPi / 2), 0);
    uniform.apply_single(gate_ry(kPi / 2), 1);
    for (std::size_t l = 0; l < 2; ++l) {
        const DiscreteDistribution cond = likelihood(uniform, split, l);
        CHECK(cond.probs[0] == doctest::Approx(0.5));
        CHECK(cond.probs[1] == doctest::Approx(0.5));
    }

    // Conditioning on a zero-probability latent fails.
    StateVector zero_latent(2);
    zero_latent.apply_single(gate_ry(0.7), 0);
    CHECK_THROWS_AS(likelihood(zero_latent, split, 1), std::invalid_argument);
}

TEST_CASE("posterior follows Bayes on explicit tables") {
    const RegisterSplit split{1, 1};
    const DiscreteDistribution post0 = posterior(bell_state(), split, 0);
    CHECK(post0.probs[0] == doctest::Approx(1.0));
    CHECK(post0.probs[1] == doctest::Approx(0.0));

    // Build a state from known tables: prior (0.6, 0.4), likelihoods
    // (0.2, 0.8) and (0.9, 0.1); amplitudes sqrt(prior * likelihood).
    const double prior_tab[2] = {0.6, 0.4};
    const double like_tab[2][2] = {{0.2, 0.8}, {0.9, 0.1}};  // [lambda][x]
    StateVector state(2);
    state.amplitudes()[0] = std::sqrt(prior_tab[0] * like_tab[0][0]);
    state.amplitudes()[1] = std::sqrt(prior_tab[1] * like_tab[1][0]);
    state.amplitudes()[2] = std::sqrt(prior_tab[0] * like_tab[0][1]);
    state.amplitudes()[3] = std::sqrt(prior_tab[1] * like_tab[1][1]);

    for (std::size_t x = 0; x < 2; ++x) {
        double evidence = 0.0;
        for (int l = 0; l < 2; ++l) evidence += prior_tab[l] * like_tab[l][x];
        const DiscreteDistribution post = posterior(state, split, x);
        for (std::size_t l = 0; l < 2; ++l) {
            CHECK(post.probs[l] ==
                  doctest::Approx(prior_tab[l] * like_tab[l][x] / evidence).epsilon(1e-12));
        }
    }

    // Uniform joint: posterior uniform for every x.
    StateVector uniform(2);
    uniform.apply_single(gate_ry(kPi / 2), 0);
    uniform.apply_single(gate_ry(kPi / 2), 1);
    for (std::size_t x = 0; x < 2; ++x) {
        const DiscreteDistribution post = posterior(uniform, split, x);
        CHECK(post.probs[0] == doctest::Approx(0.5));
        CHECK(post.probs[1] == doctest::Approx(0.5));
    }

    CHECK_THROWS_AS(posterior(bell_state(), split, 5), std::out_of_range);
    StateVector dead_outcome(2);
    dead_outcome.apply_single(gate_ry(0.4), 1);  // data stays |0>
    CHECK_THROWS_AS(posterior(dead_outcome, split, 1), std::invalid_argument);
}

TEST_CASE("data marginal sums over latents") {
    const RegisterSplit split{1, 1};
    const DiscreteDistribution bell = data_marginal(bell_state(), split);
    CHECK(bell.probs[0] == doctest::Approx(0.5));
    CHECK(bell.probs[1] == doctest::Approx(0.5));

    // With m = 0 the marginal is the full distribution.
    StateVector bare(2);
    bare.apply_single(gate_ry(0.8), 0);
    bare.apply_single(gate_ry(1.3), 1);
    const DiscreteDistribution all = data_marginal(bare, {2, 0});
    const std::vector<double> direct = bare.probabilities();
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(all.probs[i] == doctest::Approx(direct[i]).epsilon(1e-14));
    }
}

TEST_CASE("probability laws hold on random states") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const int m = 1 + static_cast<int>(rng() % (4 - n >= 1 ? 4 - n : 1));
        const RegisterSplit split{n, std::min(m, 4 - n)};
        if (split.m < 1) continue;
        const StateVector state = random_state(split.num_qubits(), rng);

        const DiscreteDistribution j = joint(state, split);
        const DiscreteDistribution w = prior(state, split);
        const DiscreteDistribution px = data_marginal(state, split);

        double wsum = 0.0, xsum = 0.0;
        for (double v : w.probs) wsum += v;
        for (double v : px.probs) xsum += v;
        CHECK(std::abs(wsum - 1.0) <= 1e-9);
        CHECK(std::abs(xsum - 1.0) <= 1e-9);

        for (std::size_t l = 0; l < w.probs.size(); ++l) {
            if (w.probs[l] <= 1e-12) continue;
            const DiscreteDistribution cond = likelihood(state, split, l);
            // Chain rule: joint = prior * likelihood.
            for (std::size_t x = 0; x < px.probs.size(); ++x) {
                CHECK(std::abs(j.probs[(x << split.m) + l] - w.probs[l] * cond.probs[x]) <=
                      1e-10);
            }
        }

        // Bayes consistency: posterior * evidence = likelihood * prior.
        for (std::size_t x = 0; x < px.probs.size(); ++x) {
            if (px.probs[x] <= 1e-12) continue;
            const DiscreteDistribution post = posterior(state, split, x);
            for (std::size_t l = 0; l < w.probs.size(); ++l) {
                if (w.probs[l] <= 1e-12) continue;
                const DiscreteDistribution cond = likelihood(state, split, l);
                CHECK(std::abs(post.probs[l] * px.probs[x] - cond.probs[x] * w.probs[l]) <=
                      1e-10);
            }
        }
    }
}

TEST_CASE("prior matches the explicit projection-operator oracle") {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const int m_max = 4 - n;
        const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(m_max));
        const RegisterSplit split{n, m};
        const StateVector state = random_state(split.num_qubits(), rng);
        const DiscreteDistribution w = prior(state, split);
        for (std::size_t l = 0; l < w.probs.size(); ++l) {
            CHECK(std::abs(w.probs[l] - projector_prior_oracle(state, split, l)) <= 1e-10);
        }
    }
}

TEST_CASE("distribution helpers validate their inputs") {
    DiscreteDistribution ok{{0.25, 0.75}};
    ok.validate();
    DiscreteDistribution negative{{-0.1, 1.1}};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
    DiscreteDistribution short_total{{0.2, 0.2}};
    CHECK_THROWS_AS(short_total.validate(), std::invalid_argument);

    CHECK(total_variation({{1.0, 0.0}}, {{0.0, 1.0}}) == doctest::Approx(1.0));
    CHECK(total_variation({{0.5, 0.5}}, {{0.5, 0.5}}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(total_variation({{1.0}}, {{0.5, 0.5}}), std::invalid_argument);

    const DiscreteDistribution d = delta_distribution(4, 2);
    CHECK(d.probs[2] == 1.0);
    CHECK_THROWS_AS(delta_distribution(4, 4), std::out_of_range);

    ShotResult shots;
    shots.counts = {{0, 3}, {3, 1}};
    shots.total_shots = 4;
    const DiscreteDistribution emp = empirical_distribution(shots, 4);
    CHECK(emp.probs[0] == doctest::Approx(0.75));
    CHECK(emp.probs[3] == doctest::Approx(0.25));
}
