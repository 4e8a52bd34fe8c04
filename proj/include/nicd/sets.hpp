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

#ifndef NICD_SETS_HPP
#define NICD_SETS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nicd/noise.hpp"

namespace nicd {

/// Explicit subset of [s]^n, stored as sorted distinct point indices.
struct ExplicitSet {
    int s = 2;
    int n = 1;
    std::vector<std::uint64_t> points;
};

/// {x : x_1 = ... = x_k = 0}, the set behind the first-k-symbols protocol.
struct CylinderSet {
    int s = 2;
    int n = 1;
    int k = 1;
};

/// Hamming ball around zero. Default form: #{i : x_i != 0} <= n(s-1)/s - alpha*sqrt(n).
/// With count_zeros set, the alternate form #{i : x_i = 0} <= n/s - alpha*sqrt(n)
/// is used instead; both have the same Gaussian limit.
struct HammingBallSet {
    int s = 2;
    int n = 1;
    double alpha = 0.0;
    bool count_zeros = false;
};

using SetSpec = std::variant<ExplicitSet, CylinderSet, HammingBallSet>;

// Floored integer weight cutoff; throws std::domain_error when the real
// threshold is negative (empty set).
int hamming_radius(const HammingBallSet& ball);

// Mean of the counted indicator per coordinate: (s-1)/s or 1/s.
double hamming_indicator_mean(const HammingBallSet& ball);

// Throws std::invalid_argument on malformed specs (unsorted/duplicate/out of
// range points, k outside [0,n], ...).
void validate_spec(const SetSpec& spec);

int spec_s(const SetSpec& spec);
int spec_n(const SetSpec& spec);
std::string spec_descriptor(const SetSpec& spec);

// P(A); requires a nonempty proper subset (throws std::domain_error otherwise).
double set_probability(const SetSpec& spec);
double log_set_probability(const SetSpec& spec);

// P(X in A, Y in A) under the model. Cylinder: closed form. Hamming ball:
// exact O(n^3) dynamic program over joint zero/nonzero counts (n <= 2000).
// Explicit: coordinate-factorized enumeration.
double joint_agreement(const SetSpec& spec, const NoiseModel& model);
double log_joint_agreement(const SetSpec& spec, const NoiseModel& model);

// ln P(Y in A | X in A) / ln P(A). Throws std::domain_error for degenerate
// inputs (P(A) in {0,1}, or epsilon = 0 where the conditional is 1).
double m_epsilon(const SetSpec& spec, const NoiseModel& model);

enum class Method { kClosedForm, kDp, kEnumeration };
std::string method_name(Method m);

struct AgreementReport {
    double set_probability = 0.0;
    double joint = 0.0;
    double conditional = 0.0;
    std::optional<double> m_value;  // absent when epsilon = 0 (degenerate)
    Method method = Method::kEnumeration;
    double log_set_probability = 0.0;
    double log_joint = 0.0;
};

AgreementReport analyze_set(const SetSpec& spec, const NoiseModel& model);

// Exact P(Wx <= radius and Wy <= radius) where (Wx, Wy) sum n iid indicator
// pairs with marginal P(ind=1) = p_one and P(both=1) = p_both.
double indicator_pair_box_probability(int n, int radius, double p_one, double p_both);

// log of sum_{w<=radius} C(n,w) q^w (1-q)^(n-w), accumulated in the log domain.
double log_binomial_tail(int n, int radius, double q);

// Materializes a structured spec as an explicit point list (guarded by the
// dense-table limit).
ExplicitSet explicit_points(const SetSpec& spec);

/// Symbol-valued function on [s]^n (a protocol half), stored densely.
struct LabelTable {
    int s = 2;
    int n = 1;
    std::vector<std::int64_t> labels;
};

// Exact P(f(X) = g(Y)), coordinate-factorized per shared label.
double protocol_agreement(const LabelTable& f, const LabelTable& g, const NoiseModel& model);

struct PreimageExtraction {
    ExplicitSet set;
    double set_probability = 0.0;
    double conditional = 0.0;   // P(Y in A | X in A); equals 1 when degenerate
    bool degenerate = false;    // P(A) = 1 (full-domain preimage)
    char source = 'f';          // which function the winning preimage came from
    std::int64_t label = 0;
};

// Best label preimage over both protocol halves: the returned conditional
// dominates P(f(X) = g(Y)) whenever both halves have min-entropy >= k.
// Min-entropy violations throw std::invalid_argument naming the offending
// label.
PreimageExtraction best_preimage_set(const LabelTable& f, const LabelTable& g, int k,
                                     const NoiseModel& model);

}  // namespace nicd

#endif  // NICD_SETS_HPP
