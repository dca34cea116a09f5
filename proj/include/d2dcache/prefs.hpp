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

#ifndef D2DCACHE_PREFS_HPP_
#define D2DCACHE_PREFS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "d2dcache/matrix.hpp"

namespace d2dcache {

//! Probability distribution over file requests, non-increasing in file rank
//! when produced by zipf_popularity.
using PopularityVector = std::vector<double>;

/*!
 * Ground-truth request statistics for a cell: per-user preference rows Q
 * (each a distribution over files), user activity weights w, and the
 * aggregate popularity p they induce.
 *
 * Invariants: every row of Q sums to 1, w sums to 1, and for every file f
 * the weighted column sum of Q reproduces p[f].
 */
struct PreferenceModel {
    std::size_t num_users = 0;
    std::size_t num_files = 0;
    double alpha = 1.0;
    double beta = 0.0;
    PopularityVector p;              //!< length F
    std::vector<double> w;           //!< length K
    Matrix Q;                        //!< K x F, row-stochastic
    std::vector<double> user_feature; //!< X_k draws, kept for diagnostics
    std::vector<double> file_feature; //!< Y_f draws
};

//! Zipf popularity over 1-based file ranks: p_f = f^-beta / sum_j j^-beta.
PopularityVector zipf_popularity(std::size_t num_files, double beta);

/*!
 * Synthesize heterogeneous user preferences from a Zipf popularity via the
 * similarity kernel (1 - |X_k - Y_f|)^(1/alpha^3 - 1). Feature values are
 * drawn uniformly on [0,1] from the seed, all X_k in user order first, then
 * all Y_f in file order.
 */
PreferenceModel synth_preferences(std::size_t num_files, std::size_t num_users,
                                  double beta, double alpha, std::uint64_t seed);

//! Variant with explicit feature values (K = |user_feature|, F = |file_feature|),
//! so kernel arithmetic can be pinned down without the RNG.
PreferenceModel synth_preferences(std::vector<double> user_feature,
                                  std::vector<double> file_feature,
                                  double beta, double alpha);

//! Cosine similarity of two preference rows, in [0, 1] for non-negative input.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

//! Mean cosine similarity over all unordered user pairs of Q. Needs K >= 2.
double average_similarity(const Matrix& Q);

//! Popularity induced by (Q, w): p_f = sum_k w_k q_{k,f}.
PopularityVector aggregate_popularity(const Matrix& Q, std::span<const double> w);

} // namespace d2dcache

#endif // D2DCACHE_PREFS_HPP_
