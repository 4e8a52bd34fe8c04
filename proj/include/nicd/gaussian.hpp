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

#ifndef NICD_GAUSSIAN_HPP
#define NICD_GAUSSIAN_HPP

#include <span>
#include <vector>

namespace nicd {

/// Correlated standard bivariate normal pair with common threshold:
/// (Z1, Z2) zero-mean, unit-variance, correlation rho.
struct GaussianPair {
    double rho = 0.0;  // 1 - epsilon in the noise application
    double t = 0.0;    // threshold
};

double normal_pdf(double t);
double normal_cdf(double t);
// Accurate into the deep lower tail (asymptotic series below t ~ -37).
double log_normal_cdf(double t);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

// P(Z1 <= t, Z2 <= t) by adaptive Gauss-Kronrod quadrature of the
// single-variable reduction; absolute error target 1e-10 (the achieved
// estimate is reported either way). Requires |rho| < 1.
QuadratureResult bivariate_orthant(const GaussianPair& gp);

// ln P(Z1 <= t, Z2 <= t) for t <= 0, exact in the log domain (the integral
// is computed with the Gaussian density factor pulled out, so deep-tail
// results keep full relative accuracy).
double log_bivariate_orthant(const GaussianPair& gp);

// Limit agreement exponent of the Hamming-ball family at threshold
// t = alpha*s/sqrt(s-1):
//   ln P(Z1 <= -t | Z2 <= -t) / ln P(Z1 <= -t),  rho = 1 - epsilon.
double hamming_limit_m(int s, double alpha, double epsilon);

// Same quantities at an arbitrary positive threshold t (used for finite-n
// convergence comparisons at the effective, floored radius).
double hamming_limit_m_at(double t, double epsilon);
double hamming_limit_conditional_at(double t, double epsilon);

struct LemmaExponent {
    double exponent = 1.0;  // 2 / (2 - eps), the admissible tail exponent
    double c_eff = 1.0;     // (exponent - 1) / eps = 1 / (2 - eps)
};

LemmaExponent lemma_exponent(double epsilon);

struct NormalLemmaReport {
    int checked = 0;
    int violations = 0;
    double tightest_margin = 0.0;  // min over the grid of bound_log - joint_log
    double worst_t = 0.0;
    double worst_epsilon = 0.0;
};

// Sharp-form tail inequality sweep:
//   P(Z1 >= t, Z2 >= t) <= P(Z >= t)^(2/(2-eps))
// checked in the log domain with 1e-9 slack on every grid point.
NormalLemmaReport verify_normal_lemma(std::span<const double> t_grid,
                                      std::span<const double> eps_grid);

}  // namespace nicd

#endif  // NICD_GAUSSIAN_HPP
