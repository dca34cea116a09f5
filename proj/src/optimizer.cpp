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

#include "d2dcache/optimizer.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace d2dcache {

namespace {

struct Candidate {
    double gain = -1.0;
    std::uint32_t file = 0;
    bool valid = false;
};

// Total order of Algorithm steps: highest gain, then lowest file, then
// lowest user (user order is the caller's scan order).
bool better(double gain, std::uint32_t file, const Candidate& cur) {
    return gain > cur.gain || (gain == cur.gain && file < cur.file);
}

void validate_instance(const Matrix& Q, std::span<const double> w,
                       const Topology& topo, std::size_t capacity) {
    if (Q.rows() != w.size() || topo.num_users() != Q.rows())
        throw std::invalid_argument("greedy_cache: shape mismatch");
    if (capacity > Q.cols())
        throw std::invalid_argument("greedy_cache: capacity exceeds catalog size");
}

} // namespace

CachingMatrix greedy_cache(const Matrix& Q, std::span<const double> w,
                           const Topology& topo, std::size_t capacity) {
    validate_instance(Q, w, topo, capacity);
    const std::size_t K = Q.rows();
    const std::size_t F = Q.cols();

    CachingMatrix cache(K, F, capacity);
    CoverageTable coverage(K, F);
    std::vector<Candidate> best(K);

    const std::size_t rounds = K * capacity;
    for (std::size_t round = 0; round < rounds; ++round) {
        // Best candidate file per user with residual capacity. Gains for a
        // fixed (m, f) accumulate over neighbors in ascending order, exactly
        // as the serial reference does, so the argmax sees the same values.
#pragma omp parallel
        {
            std::vector<double> gain(F);
#pragma omp for schedule(static)
            for (std::int64_t m = 0; m < static_cast<std::int64_t>(K); ++m) {
                const std::size_t user = static_cast<std::size_t>(m);
                if (cache.load(user) >= capacity) {
                    best[user].valid = false;
                    continue;
                }
                std::fill(gain.begin(), gain.end(), 0.0);
                for (std::uint32_t k : topo.neighbors(user)) {
                    const double wk = w[k];
                    const auto row = Q.row(k);
                    for (std::size_t f = 0; f < F; ++f)
                        if (coverage.count(k, f) == 0) gain[f] += wk * row[f];
                }
                Candidate cand;
                for (std::size_t f = 0; f < F; ++f) {
                    if (cache.at(user, f)) continue;
                    if (!cand.valid || better(gain[f], static_cast<std::uint32_t>(f), cand)) {
                        cand.gain = gain[f];
                        cand.file = static_cast<std::uint32_t>(f);
                        cand.valid = true;
                    }
                }
                best[user] = cand;
            }
        }

        std::size_t chosen_user = K;
        Candidate chosen;
        for (std::size_t m = 0; m < K; ++m) {
            if (!best[m].valid) continue;
            if (chosen_user == K || better(best[m].gain, best[m].file, chosen)) {
                chosen = best[m];
                chosen_user = m;
            }
        }
        if (chosen_user == K) break; // capacity zero

        cache.place(chosen_user, chosen.file);
        coverage.add_placement(topo, chosen_user, chosen.file);
    }
    return cache;
}

CachingMatrix popularity_cache(std::span<const double> p, const Topology& topo,
                               std::size_t capacity, std::size_t num_users) {
    const std::size_t F = p.size();
    Matrix Q(num_users, F);
    for (std::size_t k = 0; k < num_users; ++k)
        std::copy(p.begin(), p.end(), Q.row(k).begin());
    std::vector<double> w(num_users, 1.0 / static_cast<double>(num_users));
    return greedy_cache(Q, w, topo, capacity);
}

namespace {

// Objective evaluated serially; the oracle stays independent of the
// parallel evaluation path.
double objective(const Matrix& Q, std::span<const double> w,
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

bool lexicographically_before(const CachingMatrix& a, const CachingMatrix& b) {
    for (std::size_t u = 0; u < a.num_users(); ++u)
        for (std::size_t f = 0; f < a.num_files(); ++f) {
            if (a.at(u, f) != b.at(u, f)) return !a.at(u, f);
        }
    return false;
}

} // namespace

CachingMatrix brute_force_cache(const Matrix& Q, std::span<const double> w,
                                const Topology& topo, std::size_t capacity,
                                double budget) {
    validate_instance(Q, w, topo, capacity);
    const std::size_t K = Q.rows();
    const std::size_t F = Q.cols();
    const std::size_t M = std::min(capacity, F);

    // All size-M file subsets, lexicographic.
    std::vector<std::vector<std::uint32_t>> subsets;
    std::vector<std::uint32_t> current;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (current.size() == M) {
            subsets.push_back(current);
            return;
        }
        for (std::size_t f = start; f < F; ++f) {
            current.push_back(static_cast<std::uint32_t>(f));
            self(self, f + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);

    double combos = 1.0;
    for (std::size_t k = 0; k < K; ++k) combos *= static_cast<double>(subsets.size());
    if (combos > budget)
        throw std::runtime_error("brute_force_cache: enumeration budget exceeded");

    std::vector<std::size_t> pick(K, 0);
    CachingMatrix best_cache;
    double best_value = -1.0;
    bool done = false;
    while (!done) {
        CachingMatrix cache(K, F, M);
        for (std::size_t k = 0; k < K; ++k)
            for (std::uint32_t f : subsets[pick[k]]) cache.place(k, f);

        const double value = objective(Q, w, topo, cache);
        if (value > best_value ||
            (value == best_value && lexicographically_before(cache, best_cache))) {
            best_value = value;
            best_cache = cache;
        }

        // odometer over per-user subset choices
        std::size_t pos = K;
        while (pos > 0) {
            --pos;
            if (++pick[pos] < subsets.size()) break;
            pick[pos] = 0;
            if (pos == 0) done = true;
        }
    }
    return best_cache;
}

} // namespace d2dcache
