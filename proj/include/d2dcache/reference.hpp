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

#ifndef D2DCACHE_REFERENCE_HPP_
#define D2DCACHE_REFERENCE_HPP_

#include <span>

#include "d2dcache/offload.hpp"
#include "d2dcache/plsa.hpp"
#include "d2dcache/prefs.hpp"

/*!
 * Single-threaded reference kernels. The OpenMP implementations distribute
 * the same per-row partial sums across threads, so:
 *   - offloading probabilities match the parallel path bit for bit,
 *   - greedy_cache returns the identical caching matrix,
 *   - em_iteration matches the fused path to round-off.
 * Kept for correctness tests and the serial side of the benchmarks.
 */
namespace d2dcache::ref {

double offloading_probability(const Matrix& Q, std::span<const double> w,
                              const Topology& topo, const CachingMatrix& cache);

double popularity_offloading_probability(std::span<const double> p,
                                         const Topology& topo,
                                         const CachingMatrix& cache);

double average_similarity(const Matrix& Q);

//! Exhaustive-argmax greedy with per-candidate gain loops.
CachingMatrix greedy_cache(const Matrix& Q, std::span<const double> w,
                           const Topology& topo, std::size_t capacity);

//! One EM iteration via the dense posterior tensor (e_step + m_step).
plsa::Params em_iteration(const RequestLog& requests, const plsa::Params& params);

} // namespace d2dcache::ref

#endif // D2DCACHE_REFERENCE_HPP_
