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

#ifndef NICD_RNG_HPP
#define NICD_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>

namespace nicd {

// One SplitMix64 step; used to spread user seeds and derive child streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seedable, reproducible generator (mt19937_64 core, portable draws).
/// Every stochastic operation in the library takes an explicit seed or an
/// Rng; there is no hidden global state. Integer and unit draws below are
/// implemented directly on the raw 64-bit stream so results do not depend
/// on standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t s = seed;
        gen_.seed(splitmix64(s));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return gen_(); }

    // Unbiased integer in [0, bound) by rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    // Uniform double in [0, 1), 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Decorrelated child generator for stream index `stream`.
    Rng derive(std::uint64_t stream) const {
        std::uint64_t s = seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1);
        const std::uint64_t a = splitmix64(s);
        const std::uint64_t b = splitmix64(s);
        return Rng(a ^ (b << 1));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace nicd

#endif  // NICD_RNG_HPP
