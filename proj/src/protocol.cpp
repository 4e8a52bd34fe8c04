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

#include "nicd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nicd {

namespace {

constexpr int kMaxDecompositionAlphabet = 4096;
constexpr std::uint64_t kMaxCenters = 1'000'000;

int mod_pow(int base, int exp, int mod) {
    long long result = 1, b = base % mod;
    while (exp > 0) {
        if (exp & 1) result = result * b % mod;
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<int>(result);
}

int mod_inverse(int a, int p) { return mod_pow(a % p, p - 2, p); }  // p prime

// Row-reduce in place over F_p; returns the rank.
int row_reduce(std::vector<std::vector<int>>& rows, int p) {
    const int k = static_cast<int>(rows.size());
    if (k == 0) return 0;
    const int n = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < n && rank < k; ++col) {
        int pivot = -1;
        for (int r = rank; r < k; ++r)
            if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] % p != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
        const int inv = mod_inverse(rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)], p);
        for (int c = 0; c < n; ++c)
            rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)] =
                rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)] * inv % p;
        for (int r = 0; r < k; ++r) {
            if (r == rank) continue;
            const int factor = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] % p;
            if (factor == 0) continue;
            for (int c = 0; c < n; ++c) {
                int v = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -
                        factor * rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)] % p;
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = ((v % p) + p) % p;
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::vector<PrimePower> factorize(std::uint64_t value) {
    if (value < 2) throw std::invalid_argument("factorize: value must be >= 2");
    std::vector<PrimePower> factors;
    for (std::uint64_t d = 2; d * d <= value; ++d) {
        if (value % d != 0) continue;
        int exp = 0;
        while (value % d == 0) {
            value /= d;
            ++exp;
        }
        factors.push_back({d, exp});
    }
    if (value > 1) factors.push_back({value, 1});
    return factors;
}

CrtDecomposition::CrtDecomposition(int s) : s_(s) {
    if (s < 2) throw std::invalid_argument("CrtDecomposition: alphabet size must be >= 2");
    if (s > kMaxDecompositionAlphabet)
        throw std::invalid_argument("CrtDecomposition: alphabet size limited to " +
                                    std::to_string(kMaxDecompositionAlphabet));
    factors_ = factorize(static_cast<std::uint64_t>(s));
    for (const auto& f : factors_) {
        if (f.exponent > 1) squarefree_ = false;
        for (int copy = 0; copy < f.exponent; ++copy)
            layer_primes_.push_back(static_cast<int>(f.prime));
    }
    // CRT idempotents: E_i == 1 mod p_i^{j_i}, == 0 mod the other blocks.
    for (const auto& f : factors_) {
        long long pk = 1;
        for (int e = 0; e < f.exponent; ++e) pk *= static_cast<long long>(f.prime);
        const long long m = s / pk;
        long long inv = 1;  // inverse of m mod pk (extended Euclid; gcd = 1)
        {
            long long a = m % pk, mod = pk, x0 = 0, x1 = 1;
            while (a > 1) {
                const long long q = a / mod;
                long long t = mod;
                mod = a % mod;
                a = t;
                t = x0;
                x0 = x1 - q * x0;
                x1 = t;
            }
            inv = ((x1 % pk) + pk) % pk;
        }
        idempotents_.push_back(m % s * inv % s);
    }
    const std::size_t layers = layer_primes_.size();
    digits_.assign(static_cast<std::size_t>(s) * layers, 0);
    for (int sym = 0; sym < s; ++sym) {
        std::size_t layer = 0;
        for (const auto& f : factors_) {
            const int p = static_cast<int>(f.prime);
            std::uint64_t pk = 1;
            for (int e = 0; e < f.exponent; ++e) pk *= f.prime;
            int residue = static_cast<int>(static_cast<std::uint64_t>(sym) % pk);
            for (int copy = 0; copy < f.exponent; ++copy) {
                digits_[static_cast<std::size_t>(sym) * layers + layer] = residue % p;
                residue /= p;
                ++layer;
            }
        }
    }
    // Group tables via digitwise arithmetic.
    add_.assign(static_cast<std::size_t>(s) * s, 0);
    sub_.assign(static_cast<std::size_t>(s) * s, 0);
    std::vector<int> tmp(layers);
    for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) {
            for (std::size_t l = 0; l < layers; ++l)
                tmp[l] = (digit(a, static_cast<int>(l)) + digit(b, static_cast<int>(l))) %
                         layer_primes_[l];
            add_[static_cast<std::size_t>(a) * s + b] = symbol_from_digits(tmp);
            for (std::size_t l = 0; l < layers; ++l) {
                const int p = layer_primes_[l];
                tmp[l] = ((digit(a, static_cast<int>(l)) - digit(b, static_cast<int>(l))) % p + p) % p;
            }
            sub_[static_cast<std::size_t>(a) * s + b] = symbol_from_digits(tmp);
        }
    }
}

int CrtDecomposition::symbol_from_digits(const std::vector<int>& digits) const {
    if (digits.size() != layer_primes_.size())
        throw std::invalid_argument("symbol_from_digits: wrong digit count");
    // Reassemble per-factor residues, then combine with CRT idempotents.
    long long x = 0;
    std::size_t layer = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const int p = static_cast<int>(factors_[i].prime);
        long long residue = 0, scale = 1;
        for (int copy = 0; copy < factors_[i].exponent; ++copy) {
            const int d = digits[layer];
            if (d < 0 || d >= p)
                throw std::invalid_argument("symbol_from_digits: digit out of range");
            residue += scale * d;
            scale *= p;
            ++layer;
        }
        x = (x + residue % s_ * idempotents_[i]) % s_;
    }
    return static_cast<int>(x);
}

std::uint64_t CrtDecomposition::point_add(std::uint64_t a, std::uint64_t b, int n) const {
    const std::uint64_t us = static_cast<std::uint64_t>(s_);
    std::uint64_t out = 0, scale = 1;
    for (int i = 0; i < n; ++i) {
        const int sa = static_cast<int>(a % us);
        const int sb = static_cast<int>(b % us);
        a /= us;
        b /= us;
        out += scale * static_cast<std::uint64_t>(add(sa, sb));
        scale *= us;
    }
    return out;
}

std::uint64_t CrtDecomposition::point_sub(std::uint64_t a, std::uint64_t b, int n) const {
    const std::uint64_t us = static_cast<std::uint64_t>(s_);
    std::uint64_t out = 0, scale = 1;
    for (int i = 0; i < n; ++i) {
        const int sa = static_cast<int>(a % us);
        const int sb = static_cast<int>(b % us);
        a /= us;
        b /= us;
        out += scale * static_cast<std::uint64_t>(sub(sa, sb));
        scale *= us;
    }
    return out;
}

PrimeSubspace random_subspace(int p, int n, int k, Rng& rng) {
    if (k < 0 || k > n) throw std::invalid_argument("random_subspace: need 0 <= k <= n");
    PrimeSubspace sub{p, n, k, {}};
    if (k == 0) return sub;
    for (;;) {
        std::vector<std::vector<int>> rows(static_cast<std::size_t>(k),
                                           std::vector<int>(static_cast<std::size_t>(n)));
        for (auto& row : rows)
            for (int& v : row) v = rng.below_int(p);
        std::vector<std::vector<int>> reduced = rows;
        if (row_reduce(reduced, p) == k) {
            sub.basis = std::move(reduced);
            return sub;
        }
    }
}

std::vector<std::vector<int>> subspace_points(const PrimeSubspace& sub) {
    std::uint64_t count = 1;
    for (int i = 0; i < sub.k; ++i) count *= static_cast<std::uint64_t>(sub.p);
    std::vector<std::vector<int>> points;
    points.reserve(count);
    std::vector<int> coeff(static_cast<std::size_t>(sub.k), 0);
    for (std::uint64_t it = 0; it < count; ++it) {
        std::vector<int> v(static_cast<std::size_t>(sub.n), 0);
        for (int j = 0; j < sub.k; ++j) {
            if (coeff[static_cast<std::size_t>(j)] == 0) continue;
            for (int c = 0; c < sub.n; ++c)
                v[static_cast<std::size_t>(c)] =
                    (v[static_cast<std::size_t>(c)] +
                     coeff[static_cast<std::size_t>(j)] * sub.basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]) %
                    sub.p;
        }
        points.push_back(std::move(v));
        for (int j = 0; j < sub.k; ++j) {
            if (++coeff[static_cast<std::size_t>(j)] < sub.p) break;
            coeff[static_cast<std::size_t>(j)] = 0;
        }
    }
    return points;
}

std::vector<std::uint64_t> enumerate_centers(const CrtDecomposition& dec, int n,
                                             const std::vector<SubspaceLayer>& layers) {
    // Per layer: offset + each subspace element. The centers are all
    // combinations across layers, reassembled coordinatewise into symbols.
    std::vector<std::vector<std::vector<int>>> layer_elements;
    std::uint64_t total = 1;
    for (const auto& layer : layers) {
        PrimeSubspace sub{layer.p, n, static_cast<int>(layer.basis.size()), layer.basis};
        auto pts = subspace_points(sub);
        for (auto& v : pts)
            for (int c = 0; c < n; ++c)
                v[static_cast<std::size_t>(c)] =
                    (v[static_cast<std::size_t>(c)] + layer.offset[static_cast<std::size_t>(c)]) % layer.p;
        total *= pts.size();
        if (total > kMaxCenters)
            throw std::invalid_argument("enumerate_centers: center count exceeds guard");
        layer_elements.push_back(std::move(pts));
    }
    std::vector<std::uint64_t> centers;
    centers.reserve(total);
    std::vector<std::size_t> pick(layer_elements.size(), 0);
    std::vector<int> digits(layer_elements.size());
    for (std::uint64_t it = 0; it < total; ++it) {
        std::uint64_t idx = 0, scale = 1;
        for (int c = 0; c < n; ++c) {
            for (std::size_t l = 0; l < layer_elements.size(); ++l)
                digits[l] = layer_elements[l][pick[l]][static_cast<std::size_t>(c)];
            idx += scale * static_cast<std::uint64_t>(dec.symbol_from_digits(digits));
            scale *= static_cast<std::uint64_t>(dec.s());
        }
        centers.push_back(idx);
        for (std::size_t l = 0; l < layer_elements.size(); ++l) {
            if (++pick[l] < layer_elements[l].size()) break;
            pick[l] = 0;
        }
    }
    std::sort(centers.begin(), centers.end());
    return centers;
}

CenterSet build_center_set(int s, int n, int k, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("build_center_set: length must be >= 1");
    if (k < 0 || k > n) throw std::invalid_argument("build_center_set: need 0 <= k <= n");
    CrtDecomposition dec(s);
    double log_centers = k * std::log(static_cast<double>(s));
    if (log_centers > std::log(static_cast<double>(kMaxCenters)))
        throw std::invalid_argument("build_center_set: s^k exceeds center guard");
    CenterSet cs;
    cs.s = s;
    cs.n = n;
    cs.k = k;
    cs.seed = seed;
    Rng rng(seed);
    for (int layer = 0; layer < dec.layer_count(); ++layer) {
        const int p = dec.layer_prime(layer);
        Rng layer_rng = rng.derive(static_cast<std::uint64_t>(layer));
        PrimeSubspace sub = random_subspace(p, n, k, layer_rng);
        SubspaceLayer sl;
        sl.p = p;
        sl.basis = sub.basis;
        sl.offset.resize(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) sl.offset[static_cast<std::size_t>(c)] = layer_rng.below_int(p);
        cs.layers.push_back(std::move(sl));
    }
    cs.centers = enumerate_centers(dec, n, cs.layers);
    // Coset of a subgroup: all centers distinct by construction; check anyway.
    for (std::size_t i = 1; i < cs.centers.size(); ++i)
        if (cs.centers[i] == cs.centers[i - 1])
            throw std::logic_error("build_center_set: duplicate centers");
    return cs;
}

TranslationProtocol build_protocol(const ExplicitSet& set, const CenterSet& centers) {
    if (set.s != centers.s || set.n != centers.n)
        throw std::invalid_argument("build_protocol: set/center domain mismatch");
    if (set.points.empty()) throw std::invalid_argument("build_protocol: set must be nonempty");
    validate_spec(SetSpec{set});
    const std::uint64_t size = domain_size(set.s, set.n);
    if (size > 100'000'000ull / centers.centers.size())
        throw std::invalid_argument("build_protocol: decoder scan exceeds the cost guard");
    CrtDecomposition dec(set.s);

    // Ordering: members of A first (index order = lexicographic), then the
    // complement in index order.
    std::vector<std::uint32_t> rank(size);
    {
        std::vector<bool> in_set(size, false);
        for (std::uint64_t p : set.points) in_set[p] = true;
        std::uint32_t next = 0;
        for (std::uint64_t p : set.points) rank[p] = next++;
        for (std::uint64_t i = 0; i < size; ++i)
            if (!in_set[i]) rank[i] = next++;
    }

    TranslationProtocol tp;
    tp.centers = centers;
    tp.set = set;
    tp.decoder.assign(size, 0);
    for (std::uint64_t x = 0; x < size; ++x) {
        std::uint32_t best_center = 0;
        std::uint32_t best_rank = rank[dec.point_sub(x, centers.centers[0], set.n)];
        for (std::uint32_t ci = 1; ci < centers.centers.size(); ++ci) {
            const std::uint32_t r = rank[dec.point_sub(x, centers.centers[ci], set.n)];
            if (r < best_rank) {
                best_rank = r;
                best_center = ci;
            }
        }
        tp.decoder[x] = best_center;
    }
    return tp;
}

ProtocolVerification verify_protocol(const TranslationProtocol& tp, const NoiseModel& model) {
    const auto& cs = tp.centers;
    if (model.s != cs.s) throw std::invalid_argument("verify_protocol: alphabet mismatch");
    const std::uint64_t size = domain_size(cs.s, cs.n);
    const std::uint64_t num_centers = cs.centers.size();

    ProtocolVerification out;
    {
        double cap = std::pow(static_cast<double>(cs.s), cs.n - cs.k);
        const double m = static_cast<double>(tp.set.points.size());
        out.size_window_ok = (m >= cap / 8.0 - 1e-9) && (m <= cap / 4.0 + 1e-9);
    }

    // Property 1: f(X) uniform on C. X is uniform, so this is an exact
    // integer statement about decoder preimage sizes.
    std::vector<std::uint64_t> counts(num_centers, 0);
    for (std::uint64_t x = 0; x < size; ++x) ++counts[tp.decoder[x]];
    out.uniform_marginal =
        std::all_of(counts.begin(), counts.end(),
                    [&](std::uint64_t c) { return c == size / num_centers; });

    // Property 2 and agreement: per-center joint probabilities.
    std::vector<double> center_joint(num_centers, 0.0);
    for (std::uint64_t ci = 0; ci < num_centers; ++ci) {
        FunctionTable ind = make_table(cs.s, cs.n);
        for (std::uint64_t x = 0; x < size; ++x)
            if (tp.decoder[x] == ci) ind.values[x] = 1.0;
        center_joint[ci] = correlated_expectation(ind, ind, model);
    }
    double agreement = 0.0;
    for (double v : center_joint) agreement += v;
    out.agreement = agreement;
    const double mean_joint = agreement / static_cast<double>(num_centers);
    double dev = 0.0;
    for (double v : center_joint) dev = std::max(dev, std::fabs(v - mean_joint));
    out.pair_uniformity_dev = dev;
    out.uniform_conditional = dev <= 1e-12;

    out.set_conditional = joint_agreement(SetSpec{tp.set}, model) /
                          set_probability(SetSpec{tp.set});
    out.ratio = out.agreement / out.set_conditional;
    return out;
}

}  // namespace nicd
