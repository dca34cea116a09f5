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

#ifndef D2DCACHE_OPTIMIZER_HPP_
#define D2DCACHE_OPTIMIZER_HPP_

#include <cstdint>
#include <span>

#include "d2dcache/offload.hpp"

namespace d2dcache {

/*!
 * Greedy placement: run K*M rounds, each caching the (user, file) pair with
 * the highest incremental gain among users with residual capacity and files
 * not yet in that user's cache. Ties break by highest gain, then lowest
 * file index, then lowest user index, so results are reproducible.
 * Candidate evaluation is OpenMP-parallel; the committed placements are
 * bit-identical to the serial reference (see d2dcache::ref).
 */
CachingMatrix greedy_cache(const Matrix& Q, std::span<const double> w,
                           const Topology& topo, std::size_t capacity);

//! Popularity-only placement: greedy_cache on Q rows all equal to p and
//! uniform user weights 1/K.
CachingMatrix popularity_cache(std::span<const double> p, const Topology& topo,
                               std::size_t capacity, std::size_t num_users);

/*!
 * Exhaustive optimum over all placements with full per-user capacity,
 * enumerated per-user subset by subset; objective ties keep the
 * lexicographically smallest flattened matrix. Refuses instances whose
 * enumeration count exceeds `budget`. Test oracle; exponential cost.
 */
CachingMatrix brute_force_cache(const Matrix& Q, std::span<const double> w,
                                const Topology& topo, std::size_t capacity,
                                double budget = 1e6);

} // namespace d2dcache

#endif // D2DCACHE_OPTIMIZER_HPP_
