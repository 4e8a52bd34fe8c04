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

#ifndef NICD_PROTOCOL_HPP
#define NICD_PROTOCOL_HPP

#include <cstdint>
#include <vector>

#include "nicd/noise.hpp"
#include "nicd/rng.hpp"
#include "nicd/sets.hpp"

namespace nicd {

struct PrimePower {
    std::uint64_t prime = 2;
    int exponent = 1;
};

// Sorted prime factorization; throws for values < 2.
std::vector<PrimePower> factorize(std::uint64_t value);

/// Additive decomposition of the symbol set [s]. Each symbol corresponds to
/// a tuple of base-p digits, one digit per "layer" (a prime-power copy), via
/// CRT residues and base-p expansion. Componentwise digit addition induces a
/// group on [s] under which every translation permutes the alphabet; for
/// squarefree s this group coincides with addition mod s.
class CrtDecomposition {
public:
    explicit CrtDecomposition(int s);

    int s() const { return s_; }
    const std::vector<PrimePower>& factors() const { return factors_; }
    int layer_count() const { return static_cast<int>(layer_primes_.size()); }
    int layer_prime(int layer) const { return layer_primes_[static_cast<std::size_t>(layer)]; }

    // Forward component map: digit of `symbol` in the given layer.
    int digit(int symbol, int layer) const {
        return digits_[static_cast<std::size_t>(symbol) * layer_primes_.size() +
                       static_cast<std::size_t>(layer)];
    }
    // Inverse map: digits (one per layer) back to the symbol.
    int symbol_from_digits(const std::vector<int>& digits) const;

    int add(int a, int b) const { return add_[static_cast<std::size_t>(a) * s_ + b]; }
    int sub(int a, int b) const { return sub_[static_cast<std::size_t>(a) * s_ + b]; }
    int neg(int a) const { return sub(0, a); }

    // True iff s is squarefree, i.e. the induced group is plain mod-s addition.
    bool additive_over_native() const { return squarefree_; }

    // Componentwise group operations on packed point indices of [s]^n.
    std::uint64_t point_add(std::uint64_t a, std::uint64_t b, int n) const;
    std::uint64_t point_sub(std::uint64_t a, std::uint64_t b, int n) const;

private:
    int s_;
    std::vector<PrimePower> factors_;
    std::vector<int> layer_primes_;
    std::vector<long long> idempotents_;  // one per prime-power factor
    std::vector<int> digits_;    // s x layer_count, row-major
    std::vector<int> add_;       // s x s
    std::vector<int> sub_;       // s x s
    bool squarefree_ = true;
};

/// k-dimensional subspace of [p]^n in canonical reduced row echelon form.
struct PrimeSubspace {
    int p = 2;
    int n = 1;
    int k = 0;
    std::vector<std::vector<int>> basis;  // k rows of length n
};

// Grassmannian-uniform subspace: rejection-sample a k x n matrix over the
// field until it has rank k, then canonicalize its row space.
PrimeSubspace random_subspace(int p, int n, int k, Rng& rng);

// All p^k elements of the subspace (coefficient enumeration).
std::vector<std::vector<int>> subspace_points(const PrimeSubspace& sub);

struct SubspaceLayer {
    int p = 2;
    std::vector<std::vector<int>> basis;  // k x n over the field
    std::vector<int> offset;              // length n
};

/// Coset of a subgroup of ([s]^n, +) with s^k elements, assembled from one
/// random subspace-plus-offset per prime-power layer.
struct CenterSet {
    int s = 2;
    int n = 1;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<SubspaceLayer> layers;
    std::vector<std::uint64_t> centers;  // sorted point indices, size s^k
};

CenterSet build_center_set(int s, int n, int k, std::uint64_t seed);

// Rebuilds the center list from the stored layers (deserialization path).
std::vector<std::uint64_t> enumerate_centers(const CrtDecomposition& dec, int n,
                                             const std::vector<SubspaceLayer>& layers);

/// Full decoder: every point of [s]^n maps to the center whose translate
/// ranks first under the ordering that places A before its complement
/// (lexicographic within each part).
struct TranslationProtocol {
    CenterSet centers;
    ExplicitSet set;                      // the set A defining the ordering
    std::vector<std::uint32_t> decoder;   // point index -> position in centers.centers
};

TranslationProtocol build_protocol(const ExplicitSet& set, const CenterSet& centers);

struct ProtocolVerification {
    bool size_window_ok = false;      // (1/8) s^(n-k) <= |A| <= (1/4) s^(n-k)
    bool uniform_marginal = false;    // decoder preimage sizes exactly equal
    double pair_uniformity_dev = 0.0; // max deviation of P(f(X)=f(Y)=c) across c
    bool uniform_conditional = false; // dev within 1e-12
    double agreement = 0.0;           // P(f(X) = f(Y))
    double set_conditional = 0.0;     // P(Y in A | X in A)
    double ratio = 0.0;               // agreement / set_conditional
};

// Exact verification by coordinate-factorized enumeration.
ProtocolVerification verify_protocol(const TranslationProtocol& tp, const NoiseModel& model);

}  // namespace nicd

#endif  // NICD_PROTOCOL_HPP
