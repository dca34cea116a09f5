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

#include "d2dcache/topology.hpp"

#include <stdexcept>

#include "d2dcache/rng.hpp"

namespace d2dcache {

std::vector<Point> place_users(std::size_t num_users, double side, std::uint64_t seed) {
    if (num_users == 0)
        throw std::domain_error("place_users: need at least one user");
    if (!(side > 0.0))
        throw std::domain_error("place_users: side must be positive");

    Rng rng(seed);
    std::vector<Point> positions(num_users);
    for (auto& pt : positions) {
        pt.x = rng.uniform(0.0, side);
        pt.y = rng.uniform(0.0, side);
    }
    return positions;
}

Topology Topology::build(std::vector<Point> positions, double side, double rc) {
    if (positions.empty())
        throw std::domain_error("Topology: need at least one user");
    if (!(rc > 0.0))
        throw std::domain_error("Topology: collaboration distance must be positive");

    Topology topo;
    topo.side_ = side;
    topo.rc_ = rc;
    topo.full_ = false;
    topo.positions_ = std::move(positions);
    topo.rebuild_adjacency();
    return topo;
}

Topology Topology::full_mesh(std::vector<Point> positions, double side) {
    if (positions.empty())
        throw std::domain_error("Topology: need at least one user");

    Topology topo;
    topo.side_ = side;
    topo.rc_ = -1.0;
    topo.full_ = true;
    topo.positions_ = std::move(positions);
    topo.rebuild_adjacency();
    return topo;
}

void Topology::rebuild_adjacency() {
    const std::size_t K = positions_.size();
    adj_.assign(K * K, 0);
    neighbors_.assign(K, {});

    if (full_) {
        adj_.assign(K * K, 1);
        for (std::size_t k = 0; k < K; ++k) {
            neighbors_[k].resize(K);
            for (std::size_t m = 0; m < K; ++m)
                neighbors_[k][m] = static_cast<std::uint32_t>(m);
        }
        return;
    }

    const double rc_sq = rc_ * rc_;
    for (std::size_t i = 0; i < K; ++i) {
        adj_[i * K + i] = 1; // a user always reaches its own cache
        for (std::size_t j = i + 1; j < K; ++j) {
            const double dx = positions_[i].x - positions_[j].x;
            const double dy = positions_[i].y - positions_[j].y;
            if (dx * dx + dy * dy < rc_sq) { // strict: ties at rc excluded
                adj_[i * K + j] = 1;
                adj_[j * K + i] = 1;
            }
        }
    }
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j)
            if (adj_[i * K + j]) neighbors_[i].push_back(static_cast<std::uint32_t>(j));
}

} // namespace d2dcache
