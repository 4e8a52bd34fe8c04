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

#include "nicd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nicd/bounds.hpp"
#include "nicd/gaussian.hpp"
#include "nicd/noise.hpp"
#include "nicd/protocol.hpp"

namespace nicd {

namespace {

std::string describe(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

CheckResult make_check(std::string name, bool passed, double achieved, double tolerance,
                       std::string detail = {}) {
    return CheckResult{std::move(name), passed, achieved, tolerance, std::move(detail)};
}

// --- noise-identity ---------------------------------------------------------

SuiteResult suite_noise_identity(std::uint64_t seed) {
    SuiteResult suite{"noise-identity", {}, true};
    Rng rng(seed);

    // E_eps f(X) f(Y) versus E (T_sqrt(1-eps) f)^2 on random tables.
    double worst = 0.0;
    const int kFunctions = 200;
    for (int t = 0; t < kFunctions; ++t) {
        const int s = 2 + static_cast<int>(rng.below(4));
        const int n = 1 + static_cast<int>(rng.below(3));
        FunctionTable f = random_table(s, n, rng);
        for (int e = 0; e <= 9; ++e) {
            const double eps = static_cast<double>(e) / 9.0;
            const NoiseModel model{s, eps};
            const double lhs = correlated_expectation(f, f, model);
            const FunctionTable tf = apply_noise_operator(f, std::sqrt(1.0 - eps));
            double rhs = 0.0;
            for (double v : tf.values) rhs += v * v;
            rhs /= static_cast<double>(tf.values.size());
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
    }
    suite.checks.push_back(make_check("noise_operator_identity", worst <= 1e-10, worst, 1e-10,
                                      "200 random tables, s in 2..5, n in 1..3, 10 eps values"));

    // Semigroup and mean preservation.
    double worst_semi = 0.0, worst_mean = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int s = 2 + static_cast<int>(rng.below(4));
        const int n = 1 + static_cast<int>(rng.below(3));
        FunctionTable f = random_table(s, n, rng);
        const double t1 = rng.unit(), t2 = rng.unit();
        const FunctionTable a = apply_noise_operator(apply_noise_operator(f, t2), t1);
        const FunctionTable b = apply_noise_operator(f, t1 * t2);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            worst_semi = std::max(worst_semi, std::fabs(a.values[i] - b.values[i]));
        worst_mean = std::max(worst_mean,
                              std::fabs(table_mean(apply_noise_operator(f, t1)) - table_mean(f)));
    }
    suite.checks.push_back(make_check("semigroup", worst_semi <= 1e-12, worst_semi, 1e-12));
    suite.checks.push_back(make_check("mean_preservation", worst_mean <= 1e-12, worst_mean, 1e-12));

    // Kernel symmetry and marginals across alphabets.
    double worst_kernel = 0.0;
    for (int s = 2; s <= 64; ++s) {
        for (int e = 0; e <= 19; ++e) {
            const NoiseModel model{s, static_cast<double>(e) / 19.0};
            const CoordinateKernel k = coordinate_kernel(model);
            double total = 0.0;
            for (int a = 0; a < s; ++a) {
                double row = 0.0, col = 0.0;
                for (int b = 0; b < s; ++b) {
                    row += k.table[static_cast<std::size_t>(a) * s + b];
                    col += k.table[static_cast<std::size_t>(b) * s + a];
                    worst_kernel = std::max(
                        worst_kernel, std::fabs(k.table[static_cast<std::size_t>(a) * s + b] -
                                                k.table[static_cast<std::size_t>(b) * s + a]));
                }
                worst_kernel = std::max(worst_kernel, std::fabs(row - 1.0 / s));
                worst_kernel = std::max(worst_kernel, std::fabs(col - 1.0 / s));
                total += row;
            }
            worst_kernel = std::max(worst_kernel, std::fabs(total - 1.0));
        }
    }
    suite.checks.push_back(
        make_check("kernel_symmetry_marginals", worst_kernel <= 1e-12, worst_kernel, 1e-12));

    for (const auto& c : suite.checks) suite.passed = suite.passed && c.passed;
    return suite;
}

// --- hypercontractivity -----------------------------------------------------

SuiteResult suite_hypercontractivity(std::uint64_t seed) {
    SuiteResult suite{"hypercontractivity", {}, true};
    const double ps[] = {1.2, 4.0 / 3.0, 1.5, 1.8, 2.0};
    double worst_ratio = 0.0;
    int trials_total = 0;
    int cell = 0;
    Rng rng(seed);
    for (int s = 2; s <= 5; ++s) {
        for (int n = 1; n <= 3; ++n) {
            for (double p : ps) {
                const double tau = sigma(1.0 / static_cast<double>(s), p);
                const int trials = 1000;
                const auto rep = verify_hypercontractivity(s, n, p, tau, trials,
                                                           rng.derive(cell++).seed());
                trials_total += trials;
                worst_ratio = std::max(worst_ratio, rep.max_ratio);
            }
        }
    }
    std::ostringstream detail;
    detail << trials_total << " random nonnegative tables at tau = sigma(1/s, p)";
    suite.checks.push_back(make_check("norm_contraction", worst_ratio <= 1.0 + 1e-10, worst_ratio,
                                      1.0 + 1e-10, detail.str()));
    suite.passed = suite.checks.front().passed;
    return suite;
}

// --- theorem1 ----------------------------------------------------------------

SuiteResult suite_theorem1(std::uint64_t seed) {
    SuiteResult suite{"theorem1", {}, true};
    Rng rng(seed);
    int violations = 0;
    double worst_margin = 1.0;
    const int kPairs = 100;
    for (int trial = 0; trial < kPairs; ++trial) {
        Rng trial_rng = rng.derive(static_cast<std::uint64_t>(trial));
        const int s = 2 + static_cast<int>(trial_rng.below(2));       // 2..3
        const int n = 2 + static_cast<int>(trial_rng.below(4));       // 2..5
        const int k = 1 + static_cast<int>(trial_rng.below(
                              static_cast<std::uint64_t>(n - 1)));    // 1..n-1
        const double eps = 0.05 + 0.9 * trial_rng.unit();
        const NoiseModel model{s, eps};
        const LabelTable f = random_min_entropy_table(s, n, k, trial_rng);
        const LabelTable g = random_min_entropy_table(s, n, k, trial_rng);
        const double agreement = protocol_agreement(f, g, model);
        const auto extraction = best_preimage_set(f, g, k, model);
        const double margin = extraction.conditional - agreement;
        worst_margin = std::min(worst_margin, margin);
        if (margin < 0.0) ++violations;
    }
    std::ostringstream detail;
    detail << kPairs << " random min-entropy pairs; worst conditional-minus-agreement margin "
           << describe(worst_margin);
    suite.checks.push_back(
        make_check("extraction_dominates_agreement", violations == 0,
                   static_cast<double>(violations), 0.0, detail.str()));
    suite.passed = violations == 0;
    return suite;
}

// --- theorem2 ----------------------------------------------------------------

SuiteResult suite_theorem2(std::uint64_t seed) {
    SuiteResult suite{"theorem2", {}, true};
    const int n = 3, k = 1, kSeeds = 200;
    const double eps_grid[] = {0.1, 0.3, 0.5};
    bool all_uniform = true;
    double worst_pair_dev = 0.0;
    double worst_ratio = 1e300;
    const Rng root(seed);
    for (int s = 2; s <= 6; ++s) {
        std::uint64_t cap = 1;
        for (int i = 0; i < n - k; ++i) cap *= static_cast<std::uint64_t>(s);
        const std::uint64_t size =
            std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(3.0 * cap / 16.0)));
        const ExplicitSet set = lex_prefix_set(s, n, size);
        std::vector<double> sum_agreement(std::size(eps_grid), 0.0);
        std::vector<double> conditional(std::size(eps_grid), 0.0);
        for (int sd = 0; sd < kSeeds; ++sd) {
            const CenterSet centers = build_center_set(
                s, n, k, root.derive(static_cast<std::uint64_t>(s * 1000 + sd)).seed());
            const TranslationProtocol tp = build_protocol(set, centers);
            for (std::size_t e = 0; e < std::size(eps_grid); ++e) {
                const NoiseModel model{s, eps_grid[e]};
                const ProtocolVerification v = verify_protocol(tp, model);
                all_uniform = all_uniform && v.uniform_marginal && v.uniform_conditional;
                worst_pair_dev = std::max(worst_pair_dev, v.pair_uniformity_dev);
                sum_agreement[e] += v.agreement;
                conditional[e] = v.set_conditional;
            }
        }
        for (std::size_t e = 0; e < std::size(eps_grid); ++e)
            worst_ratio = std::min(worst_ratio, (sum_agreement[e] / kSeeds) / conditional[e]);
    }
    suite.checks.push_back(make_check("uniformity_exact", all_uniform, worst_pair_dev, 1e-12,
                                      "decoder marginal exact; pair distribution within 1e-12"));
    std::ostringstream detail;
    detail << "seed-averaged agreement over " << kSeeds << " seeds vs (1/16) conditional";
    suite.checks.push_back(
        make_check("expected_stability", worst_ratio >= 1.0 / 16.0, worst_ratio, 1.0 / 16.0,
                   detail.str()));
    for (const auto& c : suite.checks) suite.passed = suite.passed && c.passed;
    return suite;
}

// --- normal-lemma ------------------------------------------------------------

SuiteResult suite_normal_lemma(std::uint64_t) {
    SuiteResult suite{"normal-lemma", {}, true};
    std::vector<double> t_grid, eps_grid;
    for (double t = 0.5; t <= 5.0 + 1e-9; t += 0.5) t_grid.push_back(t);
    for (double e = 0.05; e <= 0.95 + 1e-9; e += 0.05) eps_grid.push_back(e);
    const NormalLemmaReport rep = verify_normal_lemma(t_grid, eps_grid);
    std::ostringstream detail;
    detail << rep.checked << " grid points; tightest log-margin " << describe(rep.tightest_margin)
           << " at t=" << rep.worst_t << ", eps=" << rep.worst_epsilon;
    suite.checks.push_back(make_check("tail_inequality_sharp_form", rep.violations == 0,
                                      static_cast<double>(rep.violations), 0.0, detail.str()));
    suite.passed = rep.violations == 0;
    return suite;
}

// --- hamming-convergence -----------------------------------------------------

SuiteResult suite_hamming_convergence(std::uint64_t) {
    SuiteResult suite{"hamming-convergence", {}, true};
    const int ns[] = {25, 100, 400, 1600};
    bool all_monotone = true;
    std::ostringstream detail;
    for (int s : {4, 16}) {
        for (double alpha : {0.5, 1.0}) {
            for (double eps : {0.1, 0.3}) {
                const NoiseModel model{s, eps};
                double prev_gap = 0.0;
                bool first = true, monotone = true;
                for (int n : ns) {
                    const HammingBallSet ball{s, n, alpha, false};
                    const double marginal = set_probability(SetSpec{ball});
                    const double joint = joint_agreement(SetSpec{ball}, model);
                    const double conditional = joint / marginal;
                    const double t_eff = effective_gaussian_threshold(s, n, alpha);
                    const double limit = hamming_limit_conditional_at(t_eff, eps);
                    const double gap = std::fabs(conditional - limit);
                    if (!first && gap >= prev_gap) monotone = false;
                    prev_gap = gap;
                    first = false;
                }
                if (!monotone)
                    detail << " [s=" << s << ",alpha=" << alpha << ",eps=" << eps << "]";
                all_monotone = all_monotone && monotone;
            }
        }
    }
    suite.checks.push_back(make_check(
        "conditional_gap_decreasing", all_monotone, all_monotone ? 1.0 : 0.0, 1.0,
        "finite-n DP vs Gaussian limit at the effective threshold, n in {25,100,400,1600}" +
            detail.str()));
    suite.passed = all_monotone;
    return suite;
}

}  // namespace

LabelTable random_min_entropy_table(int s, int n, int k, Rng& rng) {
    const std::uint64_t size = domain_size(s, n);
    std::uint64_t labels = 1;
    for (int i = 0; i < k; ++i) labels *= static_cast<std::uint64_t>(s);
    std::vector<std::uint64_t> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::uint64_t i = size; i > 1; --i) {
        const std::uint64_t j = rng.below(i);
        std::swap(perm[i - 1], perm[j]);
    }
    LabelTable t{s, n, std::vector<std::int64_t>(size, 0)};
    const std::uint64_t block = size / labels;
    for (std::uint64_t i = 0; i < size; ++i)
        t.labels[perm[i]] = static_cast<std::int64_t>(i / block);
    return t;
}

ExplicitSet lex_prefix_set(int s, int n, std::uint64_t size) {
    const std::uint64_t total = domain_size(s, n);
    if (size == 0 || size > total) throw std::invalid_argument("lex_prefix_set: bad size");
    ExplicitSet set{s, n, {}};
    set.points.resize(size);
    std::iota(set.points.begin(), set.points.end(), 0);
    return set;
}

double effective_gaussian_threshold(int s, int n, double alpha) {
    const HammingBallSet ball{s, n, alpha, false};
    const int radius = hamming_radius(ball);
    const double mean = static_cast<double>(n) * (static_cast<double>(s) - 1.0) / s;
    const double alpha_eff = (mean - radius) / std::sqrt(static_cast<double>(n));
    return alpha_eff * static_cast<double>(s) / std::sqrt(static_cast<double>(s) - 1.0);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "noise-identity", "hypercontractivity", "theorem1",
        "theorem2",       "normal-lemma",       "hamming-convergence"};
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "noise-identity") return suite_noise_identity(seed);
    if (name == "hypercontractivity") return suite_hypercontractivity(seed);
    if (name == "theorem1") return suite_theorem1(seed);
    if (name == "theorem2") return suite_theorem2(seed);
    if (name == "normal-lemma") return suite_normal_lemma(seed);
    if (name == "hamming-convergence") return suite_hamming_convergence(seed);
    throw std::invalid_argument("run_suite: unknown suite \"" + name + "\"");
}

}  // namespace nicd
