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

#ifndef NICD_BOUNDS_HPP
#define NICD_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace nicd {

// Hypercontractive threshold for the s-point space, alpha = 1/s:
//   sigma(alpha, p) = ((beta^(2-2/p) - alpha^(2-2/p)) /
//                      (alpha^(1-2/p) beta - beta^(1-2/p) alpha))^(1/2).
// p = 2 returns exactly 1; alpha = 1/2 uses the continuous limit sqrt(p-1)
// (the direct formula is 0/0 there). Requires alpha in (0, 1/2], p in (1, 2].
double sigma(double alpha, double p);
double sigma_sq(double alpha, double p);

// Closed-form exponent p with alpha^((2/p - 1) - delta/ln(alpha)) = 1 - eps:
//   p = 2 / (1 + (ln(1-eps) + delta)/ln(alpha)).
// Values above 2 are possible when delta >= ln(1/(1-eps)) (the certified
// bound is then <= 0); p <= 1 is outside the hypercontractive range and
// throws std::domain_error.
double solve_p(double alpha, double delta, double epsilon);

struct AlphabetScanRow {
    int s = 0;
    double p = 0.0;        // NaN when outside (1, inf)
    double sigma_sq = 0.0; // NaN when p is out of range
    bool satisfied = false;
};

struct AlphabetScan {
    double delta = 0.0;
    double epsilon = 0.0;
    int s_max = 0;
    std::optional<int> min_s;           // empty: cap reached
    std::vector<AlphabetScanRow> trace; // scanned prefix (+ a short overshoot)
    bool predicate_monotone = true;     // no false rows after the first true one
};

// Smallest s <= s_max with sigma^2(1/s, p(1/s, delta, eps)) >= 1 - eps,
// found by upward scan. Monotonicity of the predicate is checked on the
// scanned rows (the scan continues a few values past the first hit) and
// reported, not assumed.
AlphabetScan min_alphabet(double delta, double epsilon, int s_max);

struct LowerBound {
    double value = 0.0;   // (ln(1/(1-eps)) - delta) / ln(s)
    bool certified = false;
    std::optional<int> min_s;  // threshold the certification came from
};

// Agreement-exponent floor for alphabet size s, certified when s is at or
// above the min_alphabet threshold. Equals 2/p - 1 with p = solve_p(1/s,...).
LowerBound theorem3_lower_bound(int s, double epsilon, double delta, int s_max = 1 << 20);

// (1-eps)^k e^(delta k), evaluated in the log domain.
double max_success_probability(int k, double epsilon, double delta);

struct TrivialComparison {
    // Symbols the first-k-symbols protocol can recover while matching the
    // best possible success rate of any min-entropy-k protocol; always <= k.
    long long recoverable_symbols = 0;
    // Upper limit on the min-entropy of any protocol that succeeds as well
    // as the k-symbol trivial protocol; always >= k and grows with delta.
    long long min_entropy_limit = 0;
    bool inflated = false;  // min_entropy_limit > k (delta > 0 regime)
};

// Requires ln(1-eps) + delta < 0; otherwise the counts degenerate and a
// std::domain_error is thrown.
TrivialComparison trivial_symbol_count(int k, double epsilon, double delta);

struct HypercontractivityReport {
    int trials = 0;
    double tau = 0.0;
    double p = 0.0;
    double sigma_threshold = 0.0;
    double max_ratio = 0.0;  // max over trials of ||T_tau f||_2 / ||f||_p
    bool within_threshold = false;  // tau <= sigma(1/s, p)
    bool holds = false;             // max_ratio <= 1 + 1e-10
};

// Norm-contraction sweep over random nonnegative tables on [s]^n.
HypercontractivityReport verify_hypercontractivity(int s, int n, double p, double tau,
                                                   int trials, std::uint64_t seed);

}  // namespace nicd

#endif  // NICD_BOUNDS_HPP
