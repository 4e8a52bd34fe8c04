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

#ifndef NICD_VERIFY_HPP
#define NICD_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nicd/rng.hpp"
#include "nicd/sets.hpp"

namespace nicd {

struct CheckResult {
    std::string name;
    bool passed = false;
    double achieved = 0.0;   // worst observed value (residual, margin, ...)
    double tolerance = 0.0;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool passed = false;
};

// Named invariant suites: noise-identity, hypercontractivity, theorem1,
// theorem2, normal-lemma, hamming-convergence. Unknown names throw
// std::invalid_argument.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

const std::vector<std::string>& suite_names();

// Label table with min-entropy exactly k: a seeded permutation of the
// domain chopped into s^k equal blocks (so every label has probability
// exactly s^-k).
LabelTable random_min_entropy_table(int s, int n, int k, Rng& rng);

// Lexicographically-first explicit set of the given size.
ExplicitSet lex_prefix_set(int s, int n, std::uint64_t size);

// Floored Hamming radius and the effective threshold t_n it corresponds to
// (used to compare finite-n values against the Gaussian limit without the
// discretization gap).
double effective_gaussian_threshold(int s, int n, double alpha);

}  // namespace nicd

#endif  // NICD_VERIFY_HPP
