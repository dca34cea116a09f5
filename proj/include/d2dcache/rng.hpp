/*
 * Copyright 2026 The d2dcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef D2DCACHE_RNG_HPP_
#define D2DCACHE_RNG_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace d2dcache {

//! Derive an independent substream seed from a base seed (splitmix64 mix).
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*!
 * Seeded mt19937_64 wrapper. Uniform doubles use a fixed 53-bit mapping
 * instead of std::uniform_real_distribution, whose output is not pinned
 * down by the standard, so streams replay identically everywhere.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    //! Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    //! Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 gen_;
};

//! Running cumulative sums of a weight vector, for inverse-CDF sampling.
inline std::vector<double> cumulative(std::span<const double> weights) {
    std::vector<double> cdf(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cdf[i] = acc;
    }
    return cdf;
}

//! Inverse-CDF draw: first index whose cumulative weight exceeds the uniform.
inline std::size_t draw_categorical(std::span<const double> cdf, Rng& rng) {
    const double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    return std::min(idx, cdf.size() - 1);
}

} // namespace d2dcache

#endif // D2DCACHE_RNG_HPP_
