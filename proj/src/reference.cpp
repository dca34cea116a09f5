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

#include "d2dcache/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace d2dcache::ref {

double offloading_probability(const Matrix& Q, std::span<const double> w,
                              const Topology& topo, const CachingMatrix& cache) {
    const CoverageTable coverage = CoverageTable::build(topo, cache);
    double total = 0.0;
    for (std::size_t k = 0; k < Q.rows(); ++k) {
        double mass = 0.0;
        for (std::size_t f = 0; f < Q.cols(); ++f)
            if (coverage.reachable(k, f)) mass += Q(k, f);
        total += w[k] * mass;
    }
    return total;
}

double popularity_offloading_probability(std::span<const double> p,
                                         const Topology& topo,
                                         const CachingMatrix& cache) {
    const CoverageTable coverage = CoverageTable::build(topo, cache);
    double total = 0.0;
    for (std::size_t k = 0; k < cache.num_users(); ++k) {
        double mass = 0.0;
        for (std::size_t f = 0; f < cache.num_files(); ++f)
            if (coverage.reachable(k, f)) mass += p[f];
        total += mass;
    }
    return total / static_cast<double>(cache.num_users());
}

double average_similarity(const Matrix& Q) {
    const std::size_t K = Q.rows();
    if (K < 2)
        throw std::domain_error("average_similarity: need at least two users");

    std::vector<double> norm_sq(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        double s = 0.0;
        for (double v : Q.row(k)) s += v * v;
        if (s == 0.0)
            throw std::domain_error("average_similarity: zero preference row");
        norm_sq[k] = s;
    }

    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const auto qk = Q.row(k);
        double acc = 0.0;
        for (std::size_t m = k + 1; m < K; ++m) {
            const auto qm = Q.row(m);
            double dot = 0.0;
            for (std::size_t f = 0; f < qk.size(); ++f) dot += qk[f] * qm[f];
            acc += dot / std::sqrt(norm_sq[k] * norm_sq[m]);
        }
        sum += acc;
    }
    return sum / (0.5 * static_cast<double>(K) * static_cast<double>(K - 1));
}

CachingMatrix greedy_cache(const Matrix& Q, std::span<const double> w,
                           const Topology& topo, std::size_t capacity) {
    if (Q.rows() != w.size() || topo.num_users() != Q.rows())
        throw std::invalid_argument("greedy_cache: shape mismatch");
    if (capacity > Q.cols())
        throw std::invalid_argument("greedy_cache: capacity exceeds catalog size");

    const std::size_t K = Q.rows();
    const std::size_t F = Q.cols();
    CachingMatrix cache(K, F, capacity);
    CoverageTable coverage(K, F);

    const std::size_t rounds = K * capacity;
    for (std::size_t round = 0; round < rounds; ++round) {
        double best_gain = -1.0;
        std::size_t best_user = K, best_file = F;
        for (std::size_t m = 0; m < K; ++m) {
            if (cache.load(m) >= capacity) continue;
            for (std::size_t f = 0; f < F; ++f) {
                if (cache.at(m, f)) continue;
                double gain = 0.0;
                for (std::uint32_t k : topo.neighbors(m))
                    if (coverage.count(k, f) == 0) gain += w[k] * Q(k, f);
                if (best_user == K || gain > best_gain ||
                    (gain == best_gain && f < best_file)) {
                    best_gain = gain;
                    best_user = m;
                    best_file = f;
                }
            }
        }
        if (best_user == K) break;
        cache.place(best_user, best_file);
        coverage.add_placement(topo, best_user, best_file);
    }
    return cache;
}

plsa::Params em_iteration(const RequestLog& requests, const plsa::Params& params) {
    return plsa::m_step(requests, plsa::e_step(params), params.num_topics);
}

} // namespace d2dcache::ref
