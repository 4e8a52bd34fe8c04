// Copyright 2026 nicd Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "nicd/noise.hpp"

using namespace nicd;

TEST_CASE("noise model validation") {
    CHECK_THROWS_AS(make_noise_model(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_noise_model(3, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_noise_model(3, 1.5), std::invalid_argument);
    CHECK(make_noise_model(2, 0.0).s == 2);
}

TEST_CASE("coordinate kernel closed forms") {
    {
        const CoordinateKernel k = coordinate_kernel({2, 0.0});
        CHECK(k.diagonal == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(k.off_diagonal == 0.0);
    }
    {
        const CoordinateKernel k = coordinate_kernel({2, 1.0});
        for (double v : k.table) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
    }
    {
        // Two-case mixture at s=3, eps=1/2: copy with prob 1/2, resample with 1/2.
        const CoordinateKernel k = coordinate_kernel({3, 0.5});
        CHECK(k.diagonal == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
        CHECK(k.off_diagonal == doctest::Approx(1.0 / 18.0).epsilon(1e-15));
    }
}

TEST_CASE("kernel invariants for every s <= 64 over an eps grid") {
    double worst = 0.0;
    bool symmetric = true, nonnegative = true;
    for (int s = 2; s <= 64; ++s) {
        for (int e = 0; e <= 19; ++e) {
            const NoiseModel model{s, e / 19.0};
            const CoordinateKernel k = coordinate_kernel(model);
            double total = 0.0;
            for (int a = 0; a < s; ++a) {
                double row = 0.0, col = 0.0;
                for (int b = 0; b < s; ++b) {
                    const double v = k.table[static_cast<std::size_t>(a) * s + b];
                    nonnegative = nonnegative && v >= 0.0;
                    symmetric =
                        symmetric && v == k.table[static_cast<std::size_t>(b) * s + a];
                    row += v;
                    col += k.table[static_cast<std::size_t>(b) * s + a];
                }
                worst = std::max(worst, std::fabs(row - 1.0 / s));
                worst = std::max(worst, std::fabs(col - 1.0 / s));
                total += row;
            }
            worst = std::max(worst, std::fabs(total - 1.0));
        }
    }
    CHECK(nonnegative);
    CHECK(symmetric);
    CHECK(worst <= 1e-12);
}

TEST_CASE("sampler basics") {
    CHECK_THROWS_AS(sample_correlated_pair({3, 0.5}, 0, std::uint64_t{1}),
                    std::invalid_argument);
    // eps = 0: exact copy.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto [x, y] = sample_correlated_pair({5, 0.0}, 5, seed);
        CHECK(x == y);
    }
    // Determinism given the seed.
    const auto a = sample_correlated_pair({4, 0.3}, 8, std::uint64_t{42});
    const auto b = sample_correlated_pair({4, 0.3}, 8, std::uint64_t{42});
    CHECK(a == b);
}

TEST_CASE("sampler agreement frequencies") {
    {
        // s=2, eps=1: independent, P(X=Y) = 1/2.
        Rng rng(7);
        int agree = 0;
        const int trials = 200000;
        for (int i = 0; i < trials; ++i) {
            const auto [x, y] = sample_correlated_pair({2, 1.0}, 1, rng);
            if (x == y) ++agree;
        }
        const double freq = static_cast<double>(agree) / trials;
        CHECK(std::fabs(freq - 0.5) < 5.0 * std::sqrt(0.25 / trials));
    }
    {
        // s=4, eps=0.3: per-coordinate agreement 1 - (3/4)(0.3) = 0.775.
        Rng rng(8);
        int agree = 0;
        const int trials = 1000000;
        for (int i = 0; i < trials; ++i) {
            const auto [x, y] = sample_correlated_pair({4, 0.3}, 1, rng);
            if (x == y) ++agree;
        }
        const double freq = static_cast<double>(agree) / trials;
        CHECK(std::fabs(freq - 0.775) < 3.0 * std::sqrt(0.775 * 0.225 / trials));
    }
}

TEST_CASE("sampler pair frequencies match joint_probability") {
    // s=3, n=1: all 9 cells within 5 binomial standard deviations.
    const NoiseModel model{3, 0.4};
    Rng rng(123);
    const int trials = 1000000;
    std::map<std::pair<int, int>, int> counts;
    for (int i = 0; i < trials; ++i) {
        const auto [x, y] = sample_correlated_pair(model, 1, rng);
        ++counts[{x[0], y[0]}];
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double p = joint_probability(model, {a}, {b});
            const double freq = static_cast<double>(counts[{a, b}]) / trials;
            CHECK(std::fabs(freq - p) < 5.0 * std::sqrt(p * (1.0 - p) / trials));
        }
    }
}

TEST_CASE("joint probability") {
    CHECK(joint_probability({3, 0.0}, {0, 1, 2}, {0, 1, 2}) ==
          doctest::Approx(1.0 / 27.0).epsilon(1e-15));
    CHECK(joint_probability({3, 0.0}, {0, 1, 2}, {0, 1, 1}) == 0.0);
    // Per-coordinate kernel product: (1/2 * 3/4) * (1/2 * 1/4) = 3/64.
    CHECK(joint_probability({2, 0.5}, {0, 0}, {0, 1}) ==
          doctest::Approx(3.0 / 64.0).epsilon(1e-15));
    CHECK_THROWS_AS(joint_probability({2, 0.5}, {0, 0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(joint_probability({2, 0.5}, {0, 2}, {0, 1}), std::invalid_argument);

    // Cross-check by full 2-coordinate enumeration: probabilities sum to 1.
    const NoiseModel model{2, 0.5};
    double total = 0.0;
    for (int xi = 0; xi < 4; ++xi)
        for (int yi = 0; yi < 4; ++yi)
            total += joint_probability(model, string_at(xi, 2, 2), string_at(yi, 2, 2));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(std::exp(log_joint_probability(model, {0, 0}, {0, 1})) ==
          doctest::Approx(3.0 / 64.0).epsilon(1e-13));
}

TEST_CASE("noise operator basics") {
    // Constant tables are fixed points.
    FunctionTable c = make_table(3, 2);
    for (double& v : c.values) v = 2.5;
    const FunctionTable tc = apply_noise_operator(c, 0.37);
    for (double v : tc.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));

    // tau = 1 is the identity.
    Rng rng(5);
    const FunctionTable f = random_table(3, 2, rng);
    const FunctionTable tf = apply_noise_operator(f, 1.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(tf.values[i] == f.values[i]);

    // One-coordinate example: (1, 0) at tau = 1/2 -> (3/4, 1/4).
    FunctionTable g = make_table(2, 1);
    g.values = {1.0, 0.0};
    const FunctionTable tg = apply_noise_operator(g, 0.5);
    CHECK(tg.values[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(tg.values[1] == doctest::Approx(0.25).epsilon(1e-15));

    // tau = 0 collapses everything onto the mean.
    const FunctionTable avg = apply_noise_operator(f, 0.0);
    for (double v : avg.values) CHECK(v == doctest::Approx(table_mean(f)).epsilon(1e-13));

    CHECK_THROWS_AS(apply_noise_operator(g, 1.2), std::domain_error);
    CHECK_THROWS_AS(apply_noise_operator(g, -0.1), std::domain_error);
}

TEST_CASE("noise operator semigroup and mean preservation") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int s = 2 + rng.below_int(4);
        const int n = 1 + rng.below_int(3);
        const FunctionTable f = random_table(s, n, rng);
        const double t1 = rng.unit(), t2 = rng.unit();
        const FunctionTable a = apply_noise_operator(apply_noise_operator(f, t2), t1);
        const FunctionTable b = apply_noise_operator(f, t1 * t2);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
        CHECK(table_mean(apply_noise_operator(f, t1)) ==
              doctest::Approx(table_mean(f)).epsilon(1e-12));
    }
}

TEST_CASE("correlated expectation") {
    const NoiseModel model{3, 0.6};
    FunctionTable one = make_table(3, 2);
    for (double& v : one.values) v = 1.0;
    CHECK(correlated_expectation(one, one, model) == doctest::Approx(1.0).epsilon(1e-13));

    // eps = 1: independence, E f(X) g(Y) = E f * E g.
    Rng rng(3);
    const FunctionTable f = random_table(3, 2, rng);
    const FunctionTable g = random_table(3, 2, rng);
    CHECK(correlated_expectation(f, g, {3, 1.0}) ==
          doctest::Approx(table_mean(f) * table_mean(g)).epsilon(1e-13));

    FunctionTable h = make_table(2, 2);
    CHECK_THROWS_AS(correlated_expectation(f, h, model), std::invalid_argument);
}

TEST_CASE("noise operator quadratic identity") {
    // E_eps f(X) f(Y) = E (T_tau f)^2 with tau = sqrt(1 - eps).
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int s = 2 + rng.below_int(4);
        const int n = 1 + rng.below_int(3);
        const FunctionTable f = random_table(s, n, rng);
        for (int e = 0; e <= 9; ++e) {
            const double eps = e / 9.0;
            const double lhs = correlated_expectation(f, f, {s, eps});
            const FunctionTable tf = apply_noise_operator(f, std::sqrt(1.0 - eps));
            double rhs = 0.0;
            for (double v : tf.values) rhs += v * v;
            rhs /= static_cast<double>(tf.values.size());
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("correlated expectation against direct double sum") {
    // Independent oracle: the O(s^{2n}) definition.
    const NoiseModel model{3, 0.35};
    Rng rng(29);
    const FunctionTable f = random_table(3, 2, rng);
    const FunctionTable g = random_table(3, 2, rng);
    double direct = 0.0;
    for (std::uint64_t x = 0; x < 9; ++x)
        for (std::uint64_t y = 0; y < 9; ++y)
            direct += joint_probability(model, string_at(x, 3, 2), string_at(y, 3, 2)) *
                      f.values[x] * g.values[y];
    CHECK(correlated_expectation(f, g, model) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("domain guard") {
    CHECK_THROWS_AS(make_table(10, 8), std::invalid_argument);  // 10^8 > guard
    CHECK(make_table(10, 7).values.size() == 10000000u);
}
