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

#ifndef D2DCACHE_PLSA_HPP_
#define D2DCACHE_PLSA_HPP_

#include <cstdint>
#include <vector>

#include "d2dcache/matrix.hpp"

namespace d2dcache {

//! Cumulative (user, file) request counts.
struct RequestLog {
    RequestLog() = default;
    RequestLog(std::size_t users, std::size_t files)
        : num_users(users), num_files(files), counts(users * files, 0) {}

    std::size_t num_users = 0;
    std::size_t num_files = 0;
    std::vector<std::uint64_t> counts; //!< K x F, row-major

    std::uint64_t at(std::size_t k, std::size_t f) const { return counts[k * num_files + f]; }
    std::uint64_t& at(std::size_t k, std::size_t f) { return counts[k * num_files + f]; }

    std::uint64_t total() const;
    //! Elementwise accumulate (shapes must agree).
    void add(const RequestLog& increment);
};

namespace plsa {

/*!
 * Latent-topic factorization of the user-file joint distribution:
 * P(u, f) = sum_z P(z) P(u|z) P(f|z). Pz sums to 1 and every column of
 * Puz / Pfz is a distribution over users / files.
 */
struct Params {
    std::size_t num_topics = 0;
    std::size_t num_users = 0;
    std::size_t num_files = 0;
    std::vector<double> Pz;  //!< Z
    Matrix Puz;              //!< K x Z, column j = P(.|z_j)
    Matrix Pfz;              //!< F x Z

    // fit diagnostics
    std::vector<double> loglik_trace;       //!< log-likelihood after each iteration
    std::size_t degenerate_fibers = 0;      //!< posterior fibers with zero mass
    std::size_t dead_topics = 0;            //!< topics that lost all responsibility

    //! P(u_k, f_f) under the current parameters.
    double joint(std::size_t k, std::size_t f) const;
};

//! Estimated request statistics in ground-truth form.
struct PredictedStats {
    std::vector<double> w_hat; //!< K
    Matrix Q_hat;              //!< K x F, row-stochastic
    std::vector<double> p_hat; //!< F
};

struct FitOptions {
    double epsilon = 1e-6;      //!< stop when per-request log-likelihood change <= epsilon
    std::size_t max_iter = 500;
    std::size_t restarts = 1;   //!< independent EM runs; the best trace is kept
};

//! sum over cells with n > 0 of n * log P(u, f); products floored at 1e-300.
double log_likelihood(const RequestLog& requests, const Params& params);

/*!
 * Topic posteriors P(z_j | u_k, f_f) for all cells, as a Z x K x F tensor
 * indexed (j * K + k) * F + f. Zero-mass fibers fall back to uniform 1/Z.
 * Reference-path implementation; fit streams over nonzero cells instead.
 */
std::vector<double> e_step(const Params& params);

//! Parameter update from a posterior tensor as produced by e_step.
Params m_step(const RequestLog& requests, const std::vector<double>& posterior,
              std::size_t num_topics);

/*!
 * One fused E+M sweep over the nonzero cells of `requests`, OpenMP-parallel
 * with thread-count-independent accumulation order. Matches
 * e_step + m_step within round-off.
 */
Params em_iteration(const RequestLog& requests, const Params& params);

/*!
 * EM from a Dirichlet(1) initialization drawn from `seed` (Pz first, then
 * Puz columns, then Pfz columns), iterating until the per-request
 * log-likelihood change drops to epsilon or max_iter is hit.
 */
Params fit(const RequestLog& requests, std::size_t num_topics,
           const FitOptions& options, std::uint64_t seed);

//! Marginals and conditionals of the fitted joint: w_hat from row sums,
//! Q_hat rows from conditioning, p_hat from column sums.
PredictedStats predict(const Params& params);

//! Frequency-count estimate: Q_hat rows are row-normalized counts, w_hat and
//! p_hat the row/column marginals. Zero-request users fall back to p_hat.
PredictedStats frequency_baseline(const RequestLog& requests);

} // namespace plsa
} // namespace d2dcache

#endif // D2DCACHE_PLSA_HPP_
