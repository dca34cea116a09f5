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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "d2dcache/offload.hpp"
#include "d2dcache/prefs.hpp"
#include "d2dcache/reference.hpp"
#include "d2dcache/rng.hpp"

using namespace d2dcache;

namespace {

// Separated users (A = identity under a small reach).
Topology identity_topology(std::size_t users) {
    std::vector<Point> positions(users);
    for (std::size_t k = 0; k < users; ++k) positions[k] = {100.0 * k, 0.0};
    return Topology::build(std::move(positions), 100.0 * users, 1.0);
}

// The two-user, three-file instance used across the placement tests.
struct SmallInstance {
    Matrix Q{2, 3};
    std::vector<double> w{0.6, 0.4};
    Topology topo = identity_topology(2);

    SmallInstance() {
        Q(0, 0) = 0.5; Q(0, 1) = 0.3; Q(0, 2) = 0.2;
        Q(1, 0) = 0.2; Q(1, 1) = 0.3; Q(1, 2) = 0.5;
    }
};

Matrix random_preferences(std::size_t users, std::size_t files, Rng& rng) {
    Matrix Q(users, files);
    for (std::size_t k = 0; k < users; ++k) {
        double sum = 0.0;
        for (std::size_t f = 0; f < files; ++f) {
            Q(k, f) = rng.uniform();
            sum += Q(k, f);
        }
        for (std::size_t f = 0; f < files; ++f) Q(k, f) /= sum;
    }
    return Q;
}

std::vector<double> random_weights(std::size_t users, Rng& rng) {
    std::vector<double> w(users);
    double sum = 0.0;
    for (double& v : w) {
        v = rng.uniform() + 1e-3;
        sum += v;
    }
    for (double& v : w) v /= sum;
    return w;
}

CachingMatrix random_placement(std::size_t users, std::size_t files,
                               std::size_t capacity, Rng& rng) {
    CachingMatrix cache(users, files, capacity);
    for (std::size_t u = 0; u < users; ++u)
        for (std::size_t f = 0; f < files; ++f)
            if (cache.load(u) < capacity && rng.uniform() < 0.4) cache.place(u, f);
    return cache;
}

} // namespace

TEST_CASE("caching matrix bookkeeping") {
    CachingMatrix cache(2, 3, 1);
    cache.place(0, 2);
    CHECK(cache.at(0, 2));
    CHECK(cache.load(0) == 1);
    CHECK_THROWS_AS(cache.place(0, 2), std::logic_error);  // duplicate
    CHECK_THROWS_AS(cache.place(0, 1), std::logic_error);  // over capacity
    cache.place(1, 0);
    const auto placements = cache.placements();
    REQUIRE(placements.size() == 2);
    CHECK(placements[0] == std::pair<std::uint32_t, std::uint32_t>{0, 2});
    CHECK(placements[1] == std::pair<std::uint32_t, std::uint32_t>{1, 0});
}

TEST_CASE("reachable files") {
    SUBCASE("nothing cached, nothing reachable") {
        const auto topo = identity_topology(2);
        CachingMatrix cache(2, 3, 1);
        CHECK(reachable_files(topo, cache, 0).empty());
    }
    SUBCASE("isolated user sees only its own cache") {
        const auto topo = identity_topology(2);
        CachingMatrix cache(2, 3, 1);
        cache.place(0, 1);
        CHECK(reachable_files(topo, cache, 0) == std::vector<std::uint32_t>{1});
        CHECK(reachable_files(topo, cache, 1).empty());
    }
    SUBCASE("neighborhood union") {
        const auto topo = Topology::full_mesh(place_users(2, 100.0, 1), 100.0);
        CachingMatrix cache(2, 4, 1);
        cache.place(0, 0);
        cache.place(1, 2);
        CHECK(reachable_files(topo, cache, 0) == std::vector<std::uint32_t>{0, 2});
    }
}

TEST_CASE("offloading probability on the two-user instance") {
    const SmallInstance inst;
    CachingMatrix cache(2, 3, 1);
    cache.place(0, 0);
    cache.place(1, 2);
    const double measured = offloading_probability(inst.Q, inst.w, inst.topo, cache);
    CHECK(measured == doctest::Approx(0.5).epsilon(1e-12));

    // exhaustive check over all nine single-file placements: 0.5 is optimal
    double best = -1.0;
    std::size_t best_f0 = 0, best_f1 = 0;
    for (std::size_t f0 = 0; f0 < 3; ++f0)
        for (std::size_t f1 = 0; f1 < 3; ++f1) {
            const double value =
                inst.w[0] * inst.Q(0, f0) + inst.w[1] * inst.Q(1, f1);
            if (value > best) {
                best = value;
                best_f0 = f0;
                best_f1 = f1;
            }
        }
    CHECK(best == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(best_f0 == 0);
    CHECK(best_f1 == 2);
}

TEST_CASE("full coverage saturates the probability") {
    const auto model = synth_preferences(6, 4, 0.6, 0.5, 5);
    const auto topo = identity_topology(4);
    CachingMatrix cache(4, 6, 6);
    for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t f = 0; f < 6; ++f) cache.place(u, f);
    CHECK(offloading_probability(model.Q, model.w, topo, cache) ==
          doctest::Approx(1.0).epsilon(1e-9));

    CachingMatrix empty(4, 6, 6);
    CHECK(offloading_probability(model.Q, model.w, topo, empty) == 0.0);
}

TEST_CASE("full adjacency reduces to cached popularity mass") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t K = 2 + static_cast<std::size_t>(rng.uniform() * 6);
        const std::size_t F = 3 + static_cast<std::size_t>(rng.uniform() * 8);
        const Matrix Q = random_preferences(K, F, rng);
        const auto w = random_weights(K, rng);
        const auto topo = Topology::full_mesh(place_users(K, 100.0, trial + 1), 100.0);
        const auto cache = random_placement(K, F, 2, rng);

        const auto p = aggregate_popularity(Q, w);
        double cached_mass = 0.0;
        for (std::size_t f = 0; f < F; ++f) {
            bool anywhere = false;
            for (std::size_t u = 0; u < K; ++u) anywhere = anywhere || cache.at(u, f);
            if (anywhere) cached_mass += p[f];
        }
        const double general = offloading_probability(Q, w, topo, cache);
        CHECK(general == doctest::Approx(cached_mass).epsilon(1e-12));
        CHECK(general ==
              doctest::Approx(popularity_offloading_probability(p, topo, cache))
                  .epsilon(1e-12));
    }
}

TEST_CASE("popularity offloading probability") {
    const auto p = zipf_popularity(4, 0.6);

    SUBCASE("empty cache scores zero") {
        const auto topo = identity_topology(3);
        CachingMatrix cache(3, 4, 1);
        CHECK(popularity_offloading_probability(p, topo, cache) == 0.0);
    }
    SUBCASE("matches the general form for uniform users") {
        const auto positions = place_users(4, 100.0, 8);
        const auto topo = Topology::build(positions, 100.0, 45.0);
        Matrix Q(4, 4);
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t f = 0; f < 4; ++f) Q(k, f) = p[f];
        const std::vector<double> w(4, 0.25);
        Rng rng(17);
        const auto cache = random_placement(4, 4, 2, rng);
        CHECK(popularity_offloading_probability(p, topo, cache) ==
              doctest::Approx(offloading_probability(Q, w, topo, cache))
                  .epsilon(1e-12));
    }
}

TEST_CASE("incremental gain on the two-user instance") {
    const SmallInstance inst;
    CachingMatrix cache(2, 3, 1);
    CoverageTable coverage(2, 3);
    // empty cache, candidate (user 0, file 0): only user 0 is adjacent
    CHECK(incremental_gain(inst.Q, inst.w, inst.topo, cache, coverage, 0, 0) ==
          doctest::Approx(0.30).epsilon(1e-12));
}

TEST_CASE("incremental gain equals aggregate popularity under full adjacency") {
    const auto model = synth_preferences(8, 5, 0.7, 0.5, 3);
    const auto topo = Topology::full_mesh(place_users(5, 100.0, 4), 100.0);
    CachingMatrix cache(5, 8, 2);
    CoverageTable coverage(5, 8);
    for (std::size_t f = 0; f < 8; ++f) {
        const double gain = incremental_gain(model.Q, model.w, topo, cache, coverage, 2, f);
        CHECK(gain == doctest::Approx(model.p[f]).epsilon(1e-9));
    }
}

TEST_CASE("gain is zero once the file is everywhere reachable") {
    const SmallInstance inst;
    const auto topo = Topology::full_mesh(place_users(2, 100.0, 2), 100.0);
    CachingMatrix cache(2, 3, 2);
    cache.place(0, 1);
    const CoverageTable coverage = CoverageTable::build(topo, cache);
    // file 1 already reaches both users, so a second copy gains nothing
    CHECK(incremental_gain(inst.Q, inst.w, topo, cache, coverage, 1, 1) == 0.0);
    // a candidate that is already cached violates the contract
    CHECK_THROWS_AS(
        (void)incremental_gain(inst.Q, inst.w, topo, cache, coverage, 0, 1),
        std::logic_error);
}

TEST_CASE("gain identity, monotonicity, submodularity on random instances") {
    Rng rng(2024);
    int probes = 0;
    while (probes < 200) {
        const std::size_t K = 2 + static_cast<std::size_t>(rng.uniform() * 4); // <= 5
        const std::size_t F = 2 + static_cast<std::size_t>(rng.uniform() * 5); // <= 6
        const Matrix Q = random_preferences(K, F, rng);
        const auto w = random_weights(K, rng);
        const auto topo = Topology::build(place_users(K, 100.0, probes + 7), 100.0,
                                          20.0 + 60.0 * rng.uniform());
        CachingMatrix cache = random_placement(K, F, F, rng);
        const CoverageTable coverage = CoverageTable::build(topo, cache);

        const std::size_t m = static_cast<std::size_t>(rng.uniform() * K);
        const std::size_t f = static_cast<std::size_t>(rng.uniform() * F);
        if (cache.at(m, f)) continue;
        ++probes;

        const double base = offloading_probability(Q, w, topo, cache);
        const double gain = incremental_gain(Q, w, topo, cache, coverage, m, f);

        CachingMatrix grown = cache;
        grown.place(m, f);
        const double after = offloading_probability(Q, w, topo, grown);

        CHECK(std::abs(gain - (after - base)) <= 1e-12); // delta identity
        CHECK(after >= base);                            // monotone

        // shrink the placement: gains may only grow (submodularity)
        CachingMatrix smaller(K, F, F);
        bool skipped_one = false;
        for (const auto& [u, file] : cache.placements()) {
            if (!skipped_one) {
                skipped_one = true;
                continue;
            }
            smaller.place(u, file);
        }
        if (skipped_one && !smaller.at(m, f)) {
            const CoverageTable smaller_cov = CoverageTable::build(topo, smaller);
            const double gain_small =
                incremental_gain(Q, w, topo, smaller, smaller_cov, m, f);
            CHECK(gain_small >= gain);
        }
    }
}

TEST_CASE("coverage counts track neighborhood placements") {
    const auto topo = Topology::build({{0, 0}, {10, 0}, {300, 0}}, 400.0, 50.0);
    CachingMatrix cache(3, 2, 2);
    cache.place(0, 1);
    cache.place(1, 1);
    const auto coverage = CoverageTable::build(topo, cache);
    CHECK(coverage.count(0, 1) == 2); // self and the nearby neighbor
    CHECK(coverage.count(1, 1) == 2);
    CHECK(coverage.count(2, 1) == 0); // far user
    CHECK(coverage.count(0, 0) == 0);
    CHECK(coverage.reachable(0, 1));
    CHECK_FALSE(coverage.reachable(2, 1));
}

TEST_CASE("parallel offloading probability matches the serial reference bit for bit") {
    Rng rng(555);
    for (int trial = 0; trial < 5; ++trial) {
        const auto model = synth_preferences(120, 40, 0.6, 0.4, trial + 50);
        const auto topo =
            Topology::build(place_users(40, 500.0, trial + 60), 500.0, 120.0);
        const auto cache = random_placement(40, 120, 4, rng);
        const double parallel = offloading_probability(model.Q, model.w, topo, cache);
        const double serial = ref::offloading_probability(model.Q, model.w, topo, cache);
        CHECK(parallel == serial);

        const double par_pop =
            popularity_offloading_probability(model.p, topo, cache);
        const double ser_pop =
            ref::popularity_offloading_probability(model.p, topo, cache);
        CHECK(par_pop == ser_pop);
    }
}
