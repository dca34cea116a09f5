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

#ifndef D2DCACHE_TOPOLOGY_HPP_
#define D2DCACHE_TOPOLOGY_HPP_

#include <cstdint>
#include <vector>

namespace d2dcache {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/*!
 * User positions in a square cell plus the D2D adjacency they induce:
 * a_{i,j} = 1 iff the Euclidean distance between users i and j is strictly
 * below the collaboration distance. The diagonal is always 1 (a user
 * reaches its own cache).
 */
class Topology {
public:
    //! Adjacency under collaboration distance rc (strict comparison). rc > 0.
    static Topology build(std::vector<Point> positions, double side, double rc);

    //! All-ones adjacency, the rc -> infinity limit. Serialized with rc = -1.
    static Topology full_mesh(std::vector<Point> positions, double side);

    std::size_t num_users() const { return positions_.size(); }
    double side() const { return side_; }
    double collaboration_distance() const { return rc_; }
    bool is_full_mesh() const { return full_; }

    bool linked(std::size_t i, std::size_t j) const {
        return adj_[i * num_users() + j] != 0;
    }

    //! Neighbor lists are sorted ascending and include the user itself.
    const std::vector<std::uint32_t>& neighbors(std::size_t k) const {
        return neighbors_[k];
    }

    const std::vector<Point>& positions() const { return positions_; }

private:
    Topology() = default;
    void rebuild_adjacency();

    double side_ = 0.0;
    double rc_ = 0.0;
    bool full_ = false;
    std::vector<Point> positions_;
    std::vector<std::uint8_t> adj_;
    std::vector<std::vector<std::uint32_t>> neighbors_;
};

//! K i.i.d. uniform positions in [0, side]^2; per user, x is drawn before y.
std::vector<Point> place_users(std::size_t num_users, double side, std::uint64_t seed);

} // namespace d2dcache

#endif // D2DCACHE_TOPOLOGY_HPP_
