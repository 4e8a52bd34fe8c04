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
#include <numeric>

#include "nicd/sets.hpp"
#include "nicd/verify.hpp"

using namespace nicd;

namespace {

// Test-only oracles, independent of the library evaluation paths.

bool oracle_member(const SetSpec& spec, std::uint64_t idx) {
    const int s = spec_s(spec), n = spec_n(spec);
    if (const auto* e = std::get_if<ExplicitSet>(&spec))
        return std::binary_search(e->points.begin(), e->points.end(), idx);
    SymbolString x = string_at(idx, s, n);
    if (const auto* c = std::get_if<CylinderSet>(&spec)) {
        for (int i = 0; i < c->k; ++i)
            if (x[static_cast<std::size_t>(i)] != 0) return false;
        return true;
    }
    const auto& b = std::get<HammingBallSet>(spec);
    int count = 0;
    for (int v : x)
        if (b.count_zeros ? (v == 0) : (v != 0)) ++count;
    return count <= hamming_radius(b);
}

// Full-enumeration joint agreement: scan A x A, bucket pairs by the number
// of agreeing coordinates, then evaluate the kernel product per bucket.
double oracle_joint(const SetSpec& spec, const NoiseModel& model) {
    const int s = spec_s(spec), n = spec_n(spec);
    const std::uint64_t size = domain_size(s, n);
    std::vector<SymbolString> members;
    for (std::uint64_t i = 0; i < size; ++i)
        if (oracle_member(spec, i)) members.push_back(string_at(i, s, n));
    std::vector<double> agree_counts(static_cast<std::size_t>(n) + 1, 0.0);
    for (const auto& x : members) {
        for (const auto& y : members) {
            int a = 0;
            for (int i = 0; i < n; ++i)
                if (x[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(i)]) ++a;
            agree_counts[static_cast<std::size_t>(a)] += 1.0;
        }
    }
    const double kd = kernel_diagonal(model), ko = kernel_off_diagonal(model);
    double total = 0.0;
    for (int a = 0; a <= n; ++a)
        total += agree_counts[static_cast<std::size_t>(a)] * std::pow(kd, a) *
                 std::pow(ko, n - a);
    return total;
}

double oracle_probability(const SetSpec& spec) {
    const std::uint64_t size = domain_size(spec_s(spec), spec_n(spec));
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < size; ++i)
        if (oracle_member(spec, i)) ++count;
    return static_cast<double>(count) / static_cast<double>(size);
}

}  // namespace

TEST_CASE("set probability closed forms") {
    CHECK(set_probability(CylinderSet{3, 5, 2}) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    ExplicitSet half{2, 3, {0, 1, 2, 3}};
    CHECK(set_probability(SetSpec{half}) == doctest::Approx(0.5).epsilon(1e-15));

    // Radius threshold 1 at s=2, n=4: alpha with 2 - 2*alpha = 1.
    const HammingBallSet ball{2, 4, 0.5, false};
    CHECK(hamming_radius(ball) == 1);
    CHECK(set_probability(SetSpec{ball}) == doctest::Approx(5.0 / 16.0).epsilon(1e-13));
    CHECK(oracle_probability(SetSpec{ball}) == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("set probability rejects degenerate sets") {
    CHECK_THROWS_AS(set_probability(CylinderSet{3, 4, 0}), std::domain_error);
    CHECK_THROWS_AS(set_probability(SetSpec{ExplicitSet{2, 2, {}}}), std::domain_error);
    CHECK_THROWS_AS(set_probability(SetSpec{ExplicitSet{2, 2, {0, 1, 2, 3}}}),
                    std::domain_error);
    // Negative threshold: empty ball.
    CHECK_THROWS_AS(set_probability(SetSpec{HammingBallSet{2, 4, 3.0, false}}),
                    std::domain_error);
}

TEST_CASE("explicit set validation") {
    CHECK_THROWS_AS(validate_spec(SetSpec{ExplicitSet{2, 2, {3, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_spec(SetSpec{ExplicitSet{2, 2, {1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_spec(SetSpec{ExplicitSet{2, 2, {5}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_spec(SetSpec{CylinderSet{3, 4, 5}}), std::invalid_argument);
}

TEST_CASE("joint agreement closed form and eps=0") {
    // Cylinder(s=2, n=1, k=1) at eps=1/2: (1/2)(3/4) = 3/8.
    CHECK(joint_agreement(CylinderSet{2, 1, 1}, {2, 0.5}) ==
          doctest::Approx(3.0 / 8.0).epsilon(1e-14));

    // eps = 0 collapses the joint onto the set probability.
    const SetSpec specs[] = {SetSpec{CylinderSet{3, 4, 2}},
                             SetSpec{HammingBallSet{3, 6, 0.4, false}},
                             SetSpec{ExplicitSet{2, 3, {0, 2, 5}}}};
    for (const auto& spec : specs)
        CHECK(joint_agreement(spec, {spec_s(spec), 0.0}) ==
              doctest::Approx(set_probability(spec)).epsilon(1e-12));
}

TEST_CASE("hamming ball DP matches enumeration") {
    const HammingBallSet ball{3, 5, 0.3, false};
    const NoiseModel model{3, 0.4};
    CHECK(joint_agreement(SetSpec{ball}, model) ==
          doctest::Approx(oracle_joint(SetSpec{ball}, model)).epsilon(1e-12));

    const HammingBallSet zball{3, 5, 0.1, true};
    CHECK(joint_agreement(SetSpec{zball}, model) ==
          doctest::Approx(oracle_joint(SetSpec{zball}, model)).epsilon(1e-12));
}

TEST_CASE("oracle equivalence across variants and eps grid") {
    const NoiseModel base{3, 0.0};
    (void)base;
    std::vector<SetSpec> specs;
    for (int s = 2; s <= 3; ++s) {
        for (int n = 2; n <= 4; ++n) {
            for (int k = 1; k < n; ++k) specs.push_back(CylinderSet{s, n, k});
            specs.push_back(HammingBallSet{s, n, 0.3, false});
            ExplicitSet e{s, n, {}};
            const std::uint64_t size = domain_size(s, n);
            for (std::uint64_t i = 0; i < size; i += 3) e.points.push_back(i);
            specs.push_back(e);
        }
    }
    for (const auto& spec : specs) {
        CHECK(set_probability(spec) ==
              doctest::Approx(oracle_probability(spec)).epsilon(1e-12));
        for (int e = 1; e <= 10; ++e) {
            const NoiseModel model{spec_s(spec), e / 10.0};
            CHECK(joint_agreement(spec, model) ==
                  doctest::Approx(oracle_joint(spec, model)).epsilon(1e-11));
        }
    }
}

TEST_CASE("conditional agreement monotone in eps (grid)") {
    const SetSpec specs[] = {SetSpec{CylinderSet{4, 5, 2}},
                             SetSpec{HammingBallSet{4, 30, 0.5, false}},
                             SetSpec{ExplicitSet{3, 3, {0, 1, 5, 9, 13}}}};
    for (const auto& spec : specs) {
        double prev = 1.0;
        for (int e = 0; e <= 10; ++e) {
            const NoiseModel model{spec_s(spec), e / 10.0};
            const double cond = joint_agreement(spec, model) / set_probability(spec);
            CHECK(cond <= prev + 1e-12);
            prev = cond;
        }
    }
}

TEST_CASE("m_epsilon values") {
    // Eq-style cylinder value: ln(4/3)/ln(2) at s=2, eps=1/2.
    const double expected = std::log(4.0 / 3.0) / std::log(2.0);
    CHECK(m_epsilon(CylinderSet{2, 3, 1}, {2, 0.5}) ==
          doctest::Approx(expected).epsilon(1e-13));

    // eps = 1: conditional equals P(A), so the quotient is 1.
    CHECK(m_epsilon(CylinderSet{3, 4, 2}, {3, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m_epsilon(SetSpec{HammingBallSet{3, 6, 0.4, false}}, {3, 1.0}) ==
          doctest::Approx(1.0).epsilon(1e-11));

    // Cylinder value independent of k and n.
    const double reference = m_epsilon(CylinderSet{5, 8, 1}, {5, 0.35});
    for (int k = 1; k <= 8; ++k)
        CHECK(m_epsilon(CylinderSet{5, 8, k}, {5, 0.35}) ==
              doctest::Approx(reference).epsilon(1e-12));
    CHECK(m_epsilon(CylinderSet{5, 3, 2}, {5, 0.35}) ==
          doctest::Approx(reference).epsilon(1e-12));

    CHECK_THROWS_AS(m_epsilon(CylinderSet{2, 3, 1}, {2, 0.0}), std::domain_error);
}

TEST_CASE("m_epsilon in the log domain for large n") {
    // Closed forms stay finite far beyond linear-domain underflow.
    const double reference = m_epsilon(CylinderSet{4, 2, 1}, {4, 0.25});
    CHECK(m_epsilon(CylinderSet{4, 900, 700}, {4, 0.25}) ==
          doctest::Approx(reference).epsilon(1e-12));

    const AgreementReport rep = analyze_set(CylinderSet{4, 900, 700}, {4, 0.25});
    CHECK(std::isfinite(rep.log_set_probability));
    CHECK(std::isfinite(rep.log_joint));
    CHECK(rep.log_set_probability == doctest::Approx(-700 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("analyze_set report invariants") {
    const SetSpec spec{HammingBallSet{3, 40, 0.7, false}};
    const NoiseModel model{3, 0.3};
    const AgreementReport rep = analyze_set(spec, model);
    CHECK(rep.method == Method::kDp);
    CHECK(rep.joint == doctest::Approx(rep.conditional * rep.set_probability).epsilon(1e-12));
    CHECK(rep.m_value.has_value());
    CHECK(*rep.m_value ==
          doctest::Approx((rep.log_joint - rep.log_set_probability) / rep.log_set_probability)
              .epsilon(1e-12));
    const AgreementReport noiseless = analyze_set(spec, {3, 0.0});
    CHECK_FALSE(noiseless.m_value.has_value());
}

TEST_CASE("large-alphabet cylinder exponent spot check") {
    // At s = 2^16, eps = 1/2 the cylinder exponent clears (ln 2 - 0.05)/ln s.
    const int s = 65536;
    const double m = m_epsilon(CylinderSet{s, 1, 1}, {s, 0.5});
    const double floor_value = (std::log(2.0) - 0.05) / std::log(static_cast<double>(s));
    CHECK(m * std::log(static_cast<double>(s)) ==
          doctest::Approx(std::log(1.0 / (0.5 + 0.5 / s))).epsilon(1e-12));
    CHECK(m > floor_value);
}

TEST_CASE("protocol agreement matches brute force") {
    Rng rng(99);
    const NoiseModel model{3, 0.45};
    const LabelTable f = random_min_entropy_table(3, 3, 1, rng);
    const LabelTable g = random_min_entropy_table(3, 3, 2, rng);
    double brute = 0.0;
    for (std::uint64_t x = 0; x < 27; ++x)
        for (std::uint64_t y = 0; y < 27; ++y)
            if (f.labels[x] == g.labels[y])
                brute += joint_probability(model, string_at(x, 3, 3), string_at(y, 3, 3));
    CHECK(protocol_agreement(f, g, model) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("best preimage set on the first-k-symbols protocol") {
    // f = g = first k symbols: the winning preimage behaves like the cylinder.
    const int s = 3, n = 3, k = 1;
    const std::uint64_t size = domain_size(s, n);
    LabelTable f{s, n, std::vector<std::int64_t>(size)};
    for (std::uint64_t x = 0; x < size; ++x)
        f.labels[x] = static_cast<std::int64_t>(x / (size / 3));  // leading symbol
    const NoiseModel model{s, 0.4};
    const auto res = best_preimage_set(f, f, k, model);
    const double expected = std::pow(1.0 - (1.0 - 1.0 / s) * model.epsilon, k);
    CHECK(res.conditional == doctest::Approx(expected).epsilon(1e-12));
    CHECK(res.set.points.size() == size / 3);
    CHECK_FALSE(res.degenerate);
}

TEST_CASE("best preimage set degenerate and error cases") {
    const int s = 2, n = 3;
    const std::uint64_t size = domain_size(s, n);
    LabelTable constant{s, n, std::vector<std::int64_t>(size, 7)};
    const NoiseModel model{s, 0.3};
    const auto res = best_preimage_set(constant, constant, 0, model);
    CHECK(res.degenerate);
    CHECK(res.conditional == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.set.points.size() == size);

    // A constant function violates min-entropy k = 1; the offending label is named.
    bool threw = false;
    try {
        best_preimage_set(constant, constant, 1, model);
    } catch (const std::invalid_argument& e) {
        threw = true;
        CHECK(std::string(e.what()).find("label 7") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("extraction dominates agreement on random pairs") {
    Rng rng(314);
    for (int trial = 0; trial < 25; ++trial) {
        const int s = 2, n = 4, k = 2;
        Rng trial_rng = rng.derive(static_cast<std::uint64_t>(trial));
        const LabelTable f = random_min_entropy_table(s, n, k, trial_rng);
        const LabelTable g = random_min_entropy_table(s, n, k, trial_rng);
        const NoiseModel model{s, 0.05 + 0.9 * trial_rng.unit()};
        // Exhaustive verification over all 256 pairs.
        double brute = 0.0;
        for (std::uint64_t x = 0; x < 16; ++x)
            for (std::uint64_t y = 0; y < 16; ++y)
                if (f.labels[x] == g.labels[y])
                    brute += joint_probability(model, string_at(x, s, n), string_at(y, s, n));
        const auto res = best_preimage_set(f, g, k, model);
        CHECK(res.conditional >= brute - 1e-12);
        CHECK(res.set.points.size() <= 4u);  // s^(n-k)
    }
}

TEST_CASE("indicator pair box probability basics") {
    // radius >= n saturates at 1; negative radius is the empty event.
    CHECK(indicator_pair_box_probability(5, 5, 0.5, 0.3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(indicator_pair_box_probability(5, -1, 0.5, 0.3) == 0.0);
    CHECK_THROWS_AS(indicator_pair_box_probability(5000, 10, 0.5, 0.3), std::invalid_argument);

    // Independent pairs factor into the two binomial tails.
    const double p_one = 0.4;
    const double tail = std::exp(log_binomial_tail(6, 2, p_one));
    CHECK(indicator_pair_box_probability(6, 2, p_one, p_one * p_one) ==
          doctest::Approx(tail * tail).epsilon(1e-12));
}
