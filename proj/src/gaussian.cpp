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

#include "nicd/gaussian.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace nicd {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2
constexpr double kAbsTarget = 1e-10;

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

void check_rho(double rho) {
    if (!(std::fabs(rho) < 1.0))
        throw std::domain_error("bivariate_orthant: |rho| must be < 1");
}

// Core integral with the phi(t) factor pulled out, valid for t <= 0:
//   P(Z1<=t, Z2<=t) = phi(t) * I,
//   I = int_0^inf exp(t*u - u^2/2) * Phi(c1 + c2*u) du,
//   c1 = t*sqrt((1-rho)/(1+rho)), c2 = rho/sqrt(1-rho^2).
// Every factor keeps relative accuracy deep in the tail.
double scaled_lower_integral(double t, double rho, double* error_out) {
    const double d = std::sqrt(1.0 - rho * rho);
    const double c1 = t * std::sqrt((1.0 - rho) / (1.0 + rho));
    const double c2 = rho / d;
    auto integrand = [&](double u) {
        return std::exp(t * u - 0.5 * u * u) * normal_cdf(c1 + c2 * u);
    };
    // For rho near 1 the cdf factor turns on inside a boundary layer of
    // width ~1/c2; integrate the layer separately so the adaptive rule
    // resolves it.
    double value = 0.0, error = 0.0;
    double split = 0.0;
    if (std::fabs(c2) > 1.0) {
        split = std::min(12.0 / std::fabs(c2), 45.0);
        double err1 = 0.0;
        value += GaussKronrod::integrate(integrand, 0.0, split, 18, 1e-13, &err1);
        error += err1;
    }
    double err2 = 0.0;
    value += GaussKronrod::integrate(integrand, split, 45.0, 18, 1e-13, &err2);
    error += err2;
    if (error_out) *error_out = error;
    return value;
}

}  // namespace

double normal_pdf(double t) { return std::exp(-0.5 * t * t - kHalfLog2Pi); }

double normal_cdf(double t) { return 0.5 * std::erfc(-t * M_SQRT1_2); }

double log_normal_cdf(double t) {
    if (t >= -37.0) return std::log(normal_cdf(t));
    // Asymptotic expansion of the Mills ratio for the deep lower tail.
    const double t2 = t * t;
    const double series = 1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2);
    return -0.5 * t2 - std::log(-t) - kHalfLog2Pi + std::log(series);
}

QuadratureResult bivariate_orthant(const GaussianPair& gp) {
    check_rho(gp.rho);
    QuadratureResult res;
    if (gp.rho == 0.0) {
        const double c = normal_cdf(gp.t);
        res.value = c * c;
        res.error_estimate = 0.0;
        res.converged = true;
        return res;
    }
    if (gp.t <= 0.0) {
        double err = 0.0;
        const double scaled = scaled_lower_integral(gp.t, gp.rho, &err);
        const double density = normal_pdf(gp.t);
        res.value = density * scaled;
        res.error_estimate = density * err;
    } else {
        // Reflect: P(Z1<=t, Z2<=t) = 1 - 2*Phi(-t) + P(Z1<=-t, Z2<=-t).
        double err = 0.0;
        const double scaled = scaled_lower_integral(-gp.t, gp.rho, &err);
        const double density = normal_pdf(gp.t);
        res.value = 1.0 - 2.0 * normal_cdf(-gp.t) + density * scaled;
        res.error_estimate = density * err;
    }
    res.converged = res.error_estimate <= kAbsTarget;
    return res;
}

double log_bivariate_orthant(const GaussianPair& gp) {
    check_rho(gp.rho);
    if (gp.t > 0.0)
        throw std::domain_error("log_bivariate_orthant: threshold must be <= 0");
    if (gp.rho == 0.0) return 2.0 * log_normal_cdf(gp.t);
    double err = 0.0;
    const double scaled = scaled_lower_integral(gp.t, gp.rho, &err);
    return -0.5 * gp.t * gp.t - kHalfLog2Pi + std::log(scaled);
}

double hamming_limit_m_at(double t, double epsilon) {
    if (!(t > 0.0)) throw std::domain_error("hamming_limit_m: threshold must be positive");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::domain_error("hamming_limit_m: epsilon must lie in (0,1]");
    const double rho = 1.0 - epsilon;
    const double log_marginal = log_normal_cdf(-t);
    const double log_joint = log_bivariate_orthant({rho, -t});
    return (log_joint - log_marginal) / log_marginal;
}

double hamming_limit_conditional_at(double t, double epsilon) {
    const double rho = 1.0 - epsilon;
    const double log_marginal = log_normal_cdf(-t);
    const double log_joint = log_bivariate_orthant({rho, -t});
    return std::exp(log_joint - log_marginal);
}

double hamming_limit_m(int s, double alpha, double epsilon) {
    if (s < 2) throw std::invalid_argument("hamming_limit_m: s must be >= 2");
    if (!(alpha > 0.0)) throw std::domain_error("hamming_limit_m: alpha must be positive");
    const double t = alpha * static_cast<double>(s) / std::sqrt(static_cast<double>(s) - 1.0);
    return hamming_limit_m_at(t, epsilon);
}

LemmaExponent lemma_exponent(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("lemma_exponent: epsilon must lie in (0,1)");
    // The half-time semigroup carries the pair correlation rho = 1 - eps, so
    // the admissible exponent at q = 2 is p = 1 + rho and the tail bound is
    // P(Z1 >= t, Z2 >= t) <= P(Z >= t)^(2/(1+rho)). This matches the sharp
    // asymptotic orthant decay exponent 2/(1+rho).
    const double rho = 1.0 - epsilon;
    LemmaExponent out;
    out.exponent = 2.0 / (1.0 + rho);
    out.c_eff = 1.0 / (1.0 + rho);
    return out;
}

NormalLemmaReport verify_normal_lemma(std::span<const double> t_grid,
                                      std::span<const double> eps_grid) {
    NormalLemmaReport rep;
    bool first = true;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("verify_normal_lemma: t grid must be positive");
        for (double eps : eps_grid) {
            const LemmaExponent le = lemma_exponent(eps);
            // Upper-tail event reflected to the lower tail: Z -> -Z.
            const double log_joint = log_bivariate_orthant({1.0 - eps, -t});
            const double log_bound = le.exponent * log_normal_cdf(-t);
            const double margin = log_bound - log_joint;  // >= 0 when the bound holds
            ++rep.checked;
            if (margin < -1e-9) ++rep.violations;
            if (first || margin < rep.tightest_margin) {
                rep.tightest_margin = margin;
                rep.worst_t = t;
                rep.worst_epsilon = eps;
                first = false;
            }
        }
    }
    return rep;
}

}  // namespace nicd
