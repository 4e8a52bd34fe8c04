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

#include "nicd/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nicd/noise.hpp"
#include "nicd/rng.hpp"

namespace nicd {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Raw exponent from the defining relation; may land outside (1, 2].
double solve_p_raw(double alpha, double delta, double epsilon) {
    const double ratio = (std::log1p(-epsilon) + delta) / std::log(alpha);
    return 2.0 / (1.0 + ratio);
}

}  // namespace

double sigma_sq(double alpha, double p) {
    if (!(alpha > 0.0 && alpha <= 0.5))
        throw std::domain_error("sigma: alpha must lie in (0, 1/2]");
    if (!(p > 1.0 && p <= 2.0)) throw std::domain_error("sigma: p must lie in (1, 2]");
    if (p == 2.0) return 1.0;
    // At alpha = 1/2 the quotient is 0/0; its limit is the classical
    // two-point constant p - 1.
    if (std::fabs(alpha - 0.5) <= 1e-8) return p - 1.0;
    const double beta = 1.0 - alpha;
    const double num = std::pow(beta, 2.0 - 2.0 / p) - std::pow(alpha, 2.0 - 2.0 / p);
    const double den = std::pow(alpha, 1.0 - 2.0 / p) * beta -
                       std::pow(beta, 1.0 - 2.0 / p) * alpha;
    return num / den;
}

double sigma(double alpha, double p) { return std::sqrt(sigma_sq(alpha, p)); }

double solve_p(double alpha, double delta, double epsilon) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("solve_p: alpha must lie in (0,1)");
    if (!(delta >= 0.0)) throw std::domain_error("solve_p: delta must be >= 0");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("solve_p: epsilon must lie in (0,1)");
    const double p = solve_p_raw(alpha, delta, epsilon);
    if (!(p > 1.0))
        throw std::domain_error("solve_p: exponent left the hypercontractive range (p <= 1)");
    return p;
}

AlphabetScan min_alphabet(double delta, double epsilon, int s_max) {
    if (s_max < 2) throw std::invalid_argument("min_alphabet: s_max must be >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("min_alphabet: delta must be > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("min_alphabet: epsilon must lie in (0,1)");
    AlphabetScan scan;
    scan.delta = delta;
    scan.epsilon = epsilon;
    scan.s_max = s_max;
    const double target = 1.0 - epsilon;
    constexpr int kOvershoot = 8;  // keep scanning past the hit so the
                                   // monotonicity report is not vacuous
    int stop_at = s_max;
    for (int s = 2; s <= stop_at; ++s) {
        AlphabetScanRow row;
        row.s = s;
        const double alpha = 1.0 / static_cast<double>(s);
        const double p = solve_p_raw(alpha, delta, epsilon);
        if (p >= 2.0 || p <= 0.0) {
            // delta >= ln(1/(1-eps)): tau = 1 suffices, predicate holds trivially.
            row.p = 2.0;
            row.sigma_sq = 1.0;
            row.satisfied = true;
        } else if (p <= 1.0) {
            row.p = kNan;
            row.sigma_sq = kNan;
            row.satisfied = false;
        } else {
            row.p = p;
            row.sigma_sq = sigma_sq(alpha, p);
            row.satisfied = row.sigma_sq >= target;
        }
        if (row.satisfied && !scan.min_s) {
            scan.min_s = s;
            stop_at = std::min(s_max, s + kOvershoot);
        }
        scan.trace.push_back(row);
    }
    bool seen_true = false;
    for (const auto& row : scan.trace) {
        if (row.satisfied) seen_true = true;
        else if (seen_true) scan.predicate_monotone = false;
    }
    return scan;
}

LowerBound theorem3_lower_bound(int s, double epsilon, double delta, int s_max) {
    if (s < 2) throw std::invalid_argument("theorem3_lower_bound: s must be >= 2");
    LowerBound out;
    out.value = (std::log(1.0 / (1.0 - epsilon)) - delta) / std::log(static_cast<double>(s));
    AlphabetScan scan = min_alphabet(delta, epsilon, s_max);
    out.min_s = scan.min_s;
    out.certified = scan.min_s && s >= *scan.min_s;
    return out;
}

double max_success_probability(int k, double epsilon, double delta) {
    if (k < 1) throw std::invalid_argument("max_success_probability: k must be >= 1");
    return std::exp(static_cast<double>(k) * (std::log1p(-epsilon) + delta));
}

TrivialComparison trivial_symbol_count(int k, double epsilon, double delta) {
    if (k < 1) throw std::invalid_argument("trivial_symbol_count: k must be >= 1");
    const double log_1me = std::log1p(-epsilon);
    if (!(log_1me + delta < 0.0))
        throw std::domain_error(
            "trivial_symbol_count: delta >= -log(1-eps), symbol count degenerates");
    TrivialComparison out;
    out.recoverable_symbols =
        static_cast<long long>(std::floor(static_cast<double>(k) * (log_1me + delta) / log_1me));
    out.min_entropy_limit =
        static_cast<long long>(std::floor(static_cast<double>(k) * log_1me / (log_1me + delta)));
    out.inflated = out.min_entropy_limit > k;
    return out;
}

HypercontractivityReport verify_hypercontractivity(int s, int n, double p, double tau,
                                                   int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("verify_hypercontractivity: trials must be >= 1");
    HypercontractivityReport rep;
    rep.trials = trials;
    rep.tau = tau;
    rep.p = p;
    rep.sigma_threshold = sigma(1.0 / static_cast<double>(s), p);
    rep.within_threshold = tau <= rep.sigma_threshold + 1e-15;
    Rng rng(seed);
    double max_ratio = 0.0;
    for (int t = 0; t < trials; ++t) {
        FunctionTable f = random_table(s, n, rng);
        const FunctionTable tf = apply_noise_operator(f, tau);
        const double lhs = lp_norm(tf, 2.0);
        const double rhs = lp_norm(f, p);
        max_ratio = std::max(max_ratio, lhs / rhs);
    }
    rep.max_ratio = max_ratio;
    rep.holds = max_ratio <= 1.0 + 1e-10;
    return rep;
}

}  // namespace nicd
