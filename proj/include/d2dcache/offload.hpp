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

#ifndef D2DCACHE_OFFLOAD_HPP_
#define D2DCACHE_OFFLOAD_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "d2dcache/matrix.hpp"
#include "d2dcache/topology.hpp"

namespace d2dcache {

/*!
 * Binary K x F placement of files onto user caches, at most `capacity`
 * files per user.
 */
class CachingMatrix {
public:
    CachingMatrix() = default;
    CachingMatrix(std::size_t users, std::size_t files, std::size_t capacity)
        : users_(users), files_(files), capacity_(capacity),
          bits_(users * files, 0), load_(users, 0) {}

    std::size_t num_users() const { return users_; }
    std::size_t num_files() const { return files_; }
    std::size_t capacity() const { return capacity_; }

    bool at(std::size_t u, std::size_t f) const { return bits_[u * files_ + f] != 0; }
    std::size_t load(std::size_t u) const { return load_[u]; }

    //! Caches file f at user u. Throws on duplicates and capacity overflow.
    void place(std::size_t u, std::size_t f);

    //! (user, file) pairs sorted lexicographically.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> placements() const;

    bool operator==(const CachingMatrix&) const = default;

private:
    std::size_t users_ = 0;
    std::size_t files_ = 0;
    std::size_t capacity_ = 0;
    std::vector<std::uint8_t> bits_;
    std::vector<std::uint32_t> load_;
};

/*!
 * Reachability counts D[k][f] = number of k's neighbors (self included)
 * caching file f. File f is reachable by k iff the count is positive.
 * Counts, not booleans, so placements update exactly.
 */
class CoverageTable {
public:
    CoverageTable() = default;
    CoverageTable(std::size_t users, std::size_t files)
        : users_(users), files_(files), counts_(users * files, 0) {}

    static CoverageTable build(const Topology& topo, const CachingMatrix& cache);

    std::uint32_t count(std::size_t k, std::size_t f) const { return counts_[k * files_ + f]; }
    bool reachable(std::size_t k, std::size_t f) const { return count(k, f) > 0; }

    //! Registers a new placement (m, f): bumps the count for every neighbor of m.
    void add_placement(const Topology& topo, std::size_t m, std::size_t f);

    std::size_t num_users() const { return users_; }
    std::size_t num_files() const { return files_; }

private:
    std::size_t users_ = 0;
    std::size_t files_ = 0;
    std::vector<std::uint32_t> counts_;
};

//! Files user k can fetch over D2D: union of caches over k's neighborhood.
std::vector<std::uint32_t> reachable_files(const Topology& topo,
                                           const CachingMatrix& cache,
                                           std::size_t k);

//! Probability that a request is served from some reachable cache:
//! sum_k w_k sum_{f reachable by k} q_{k,f}.
double offloading_probability(const Matrix& Q, std::span<const double> w,
                              const Topology& topo, const CachingMatrix& cache);

//! Popularity-only form, all users weighted equally:
//! (1/K) sum_f p_f sum_k [f reachable by k].
double popularity_offloading_probability(std::span<const double> p,
                                         const Topology& topo,
                                         const CachingMatrix& cache);

/*!
 * Gain of caching file f at user m on top of `cache`: the request mass of
 * m's neighbors for which f becomes newly reachable. Equals the
 * offloading-probability difference of the two placements.
 * Requires c_{m,f} = 0 and `coverage` consistent with `cache`.
 */
double incremental_gain(const Matrix& Q, std::span<const double> w,
                        const Topology& topo, const CachingMatrix& cache,
                        const CoverageTable& coverage, std::size_t m, std::size_t f);

} // namespace d2dcache

#endif // D2DCACHE_OFFLOAD_HPP_
