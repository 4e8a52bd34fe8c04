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

#ifndef NICD_NOISE_HPP
#define NICD_NOISE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "nicd/rng.hpp"

namespace nicd {

// Dense tables are capped so memory use stays predictable.
inline constexpr std::uint64_t kMaxTableEntries = 10'000'000;

/// Correlated-pair model on [s]^n: X uniform, and per coordinate Y_i copies
/// X_i with probability 1-epsilon, otherwise Y_i is resampled uniformly.
struct NoiseModel {
    int s = 2;
    double epsilon = 0.0;
};

// Validates s >= 2 and epsilon in [0,1].
NoiseModel make_noise_model(int s, double epsilon);

/// A string over the alphabet [s] = {0, ..., s-1}.
using SymbolString = std::vector<int>;

// s^n with overflow/entry-count checks (throws std::invalid_argument).
std::uint64_t domain_size(int s, int n);

// Big-endian packing: the first symbol is the most significant digit, so
// lexicographic order of strings equals numeric order of indices.
std::uint64_t index_of(const SymbolString& x, int s);
SymbolString string_at(std::uint64_t index, int s, int n);

/// Joint per-coordinate law of (X_i, Y_i): an s x s table with equal
/// diagonal entries, equal off-diagonal entries, and uniform marginals.
struct CoordinateKernel {
    int s = 2;
    double diagonal = 0.0;      // (1/s)(1 - eps + eps/s)
    double off_diagonal = 0.0;  // (1/s)(eps/s)
    std::vector<double> table;  // row-major, s*s entries
};

CoordinateKernel coordinate_kernel(const NoiseModel& model);
double kernel_diagonal(const NoiseModel& model);
double kernel_off_diagonal(const NoiseModel& model);

// One correlated pair (X, Y); deterministic given the seed.
std::pair<SymbolString, SymbolString> sample_correlated_pair(const NoiseModel& model, int n,
                                                             std::uint64_t seed);
std::pair<SymbolString, SymbolString> sample_correlated_pair(const NoiseModel& model, int n,
                                                             Rng& rng);

// Product over coordinates of kernel entries.
double joint_probability(const NoiseModel& model, const SymbolString& x, const SymbolString& y);
double log_joint_probability(const NoiseModel& model, const SymbolString& x,
                             const SymbolString& y);

/// Real-valued function on [s]^n stored as a dense table (index_of order).
struct FunctionTable {
    int s = 2;
    int n = 1;
    std::vector<double> values;
};

FunctionTable make_table(int s, int n);
FunctionTable random_table(int s, int n, Rng& rng);  // values uniform in [0,1)

double table_mean(const FunctionTable& f);
// (E |f|^p)^{1/p} under the uniform measure; p >= 1.
double lp_norm(const FunctionTable& f, double p);

// Applies tau*g + (1-tau)*E g along every coordinate in sequence.
FunctionTable apply_noise_operator(const FunctionTable& f, double tau);

// Exact E f(X) g(Y) under the model, computed coordinate-factorized.
double correlated_expectation(const FunctionTable& f, const FunctionTable& g,
                              const NoiseModel& model);

// Internal building block, exposed for reuse: contracts `matrix` (s x s,
// row-major) along one coordinate axis of a dense table.
void apply_axis_matrix(std::vector<double>& values, int s, int n, int axis,
                       const double* matrix);

}  // namespace nicd

#endif  // NICD_NOISE_HPP
