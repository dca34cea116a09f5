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

#include "d2dcache/offload.hpp"

#include <cstdint>
#include <stdexcept>

namespace d2dcache {

void CachingMatrix::place(std::size_t u, std::size_t f) {
    if (u >= users_ || f >= files_)
        throw std::invalid_argument("CachingMatrix: index out of range");
    if (at(u, f))
        throw std::logic_error("CachingMatrix: file already cached at user");
    if (load_[u] >= capacity_)
        throw std::logic_error("CachingMatrix: user cache is full");
    bits_[u * files_ + f] = 1;
    ++load_[u];
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> CachingMatrix::placements() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::size_t u = 0; u < users_; ++u)
        for (std::size_t f = 0; f < files_; ++f)
            if (at(u, f))
                out.emplace_back(static_cast<std::uint32_t>(u),
                                 static_cast<std::uint32_t>(f));
    return out; // row-major scan is already lexicographic
}

CoverageTable CoverageTable::build(const Topology& topo, const CachingMatrix& cache) {
    CoverageTable table(cache.num_users(), cache.num_files());
    for (std::size_t m = 0; m < cache.num_users(); ++m)
        for (std::size_t f = 0; f < cache.num_files(); ++f)
            if (cache.at(m, f)) table.add_placement(topo, m, f);
    return table;
}

void CoverageTable::add_placement(const Topology& topo, std::size_t m, std::size_t f) {
    for (std::uint32_t k : topo.neighbors(m)) ++counts_[k * files_ + f];
}

std::vector<std::uint32_t> reachable_files(const Topology& topo,
                                           const CachingMatrix& cache,
                                           std::size_t k) {
    const std::size_t F = cache.num_files();
    std::vector<std::uint8_t> seen(F, 0);
    for (std::uint32_t m : topo.neighbors(k))
        for (std::size_t f = 0; f < F; ++f)
            if (cache.at(m, f)) seen[f] = 1;

    std::vector<std::uint32_t> files;
    for (std::size_t f = 0; f < F; ++f)
        if (seen[f]) files.push_back(static_cast<std::uint32_t>(f));
    return files;
}

double offloading_probability(const Matrix& Q, std::span<const double> w,
                              const Topology& topo, const CachingMatrix& cache) {
    const std::size_t K = Q.rows();
    const std::size_t F = Q.cols();
    if (w.size() != K || topo.num_users() != K || cache.num_users() != K ||
        cache.num_files() != F)
        throw std::invalid_argument("offloading_probability: shape mismatch");

    const CoverageTable coverage = CoverageTable::build(topo, cache);

    // Per-user partials combined in user order; the parallel and serial
    // paths perform identical arithmetic.
    std::vector<double> partial(K, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(K); ++k) {
        const auto row = Q.row(static_cast<std::size_t>(k));
        double mass = 0.0;
        for (std::size_t f = 0; f < F; ++f)
            if (coverage.reachable(static_cast<std::size_t>(k), f)) mass += row[f];
        partial[k] = w[k] * mass;
    }

    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double popularity_offloading_probability(std::span<const double> p,
                                         const Topology& topo,
                                         const CachingMatrix& cache) {
    const std::size_t K = cache.num_users();
    const std::size_t F = cache.num_files();
    if (p.size() != F || topo.num_users() != K)
        throw std::invalid_argument("popularity_offloading_probability: shape mismatch");

    const CoverageTable coverage = CoverageTable::build(topo, cache);

    std::vector<double> partial(K, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(K); ++k) {
        double mass = 0.0;
        for (std::size_t f = 0; f < F; ++f)
            if (coverage.reachable(static_cast<std::size_t>(k), f)) mass += p[f];
        partial[k] = mass;
    }

    double total = 0.0;
    for (double v : partial) total += v;
    return total / static_cast<double>(K);
}

double incremental_gain(const Matrix& Q, std::span<const double> w,
                        const Topology& topo, const CachingMatrix& cache,
                        const CoverageTable& coverage, std::size_t m, std::size_t f) {
    if (cache.at(m, f))
        throw std::logic_error("incremental_gain: candidate already cached");

    double gain = 0.0;
    for (std::uint32_t k : topo.neighbors(m))
        if (coverage.count(k, f) == 0) gain += w[k] * Q(k, f);
    return gain;
}

} // namespace d2dcache
