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

#ifndef D2DCACHE_SIM_HPP_
#define D2DCACHE_SIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "d2dcache/plsa.hpp"
#include "d2dcache/prefs.hpp"
#include "d2dcache/topology.hpp"

namespace d2dcache {

//! The six placement schemes compared in the experiments.
enum class Scheme {
    S1Perfect,  //!< greedy on true preferences
    S2Perfect,  //!< greedy on true popularity
    S1Plsa,     //!< greedy on pLSA-predicted preferences
    S2Plsa,     //!< greedy on pLSA-predicted popularity
    S1Baseline, //!< greedy on frequency-count preferences
    S2Baseline, //!< greedy on frequency-count popularity
};

const std::vector<Scheme>& all_schemes();
std::string scheme_name(Scheme s);
//! Throws std::invalid_argument listing the valid names on failure.
Scheme parse_scheme(const std::string& name);

struct Seeds {
    std::uint64_t world = 1;   //!< preferences + topology
    std::uint64_t traffic = 2; //!< request generation
    std::uint64_t learner = 3; //!< EM initialization (advanced by period)
};

struct SimConfig {
    std::size_t num_users = 100;      //!< K
    std::size_t num_files = 500;      //!< F
    std::size_t cache_size = 5;       //!< M
    std::size_t num_topics = 10;      //!< Z
    double beta = 0.6;
    double alpha = 0.4;
    double side = 500.0;              //!< cell side, meters
    double rc = 50.0;                 //!< collaboration distance, meters
    double request_rate = 0.4;        //!< cell-wide requests per second
    double period_seconds = 7200.0;
    std::size_t num_periods = 100;
    Seeds seeds;
    std::vector<Scheme> schemes = all_schemes();
    double epsilon = 1e-6;
    std::size_t max_iter = 500;
    bool redraw_topology = false;     //!< redraw positions every period
};

//! Per-scheme offloading-probability series, always evaluated against the
//! ground-truth preferences and topology.
struct TimeSeries {
    std::vector<Scheme> schemes;
    std::vector<std::vector<double>> values; //!< [scheme][period]
};

//! Requests accumulated over one period: round(rate * seconds).
std::uint64_t requests_per_period(const SimConfig& config);

//! `count` i.i.d. request draws: user from w, then file from that user's
//! preference row. One uniform per draw, user before file.
RequestLog generate_requests(const PreferenceModel& model, std::uint64_t count,
                             std::uint64_t seed);

/*!
 * Multi-period loop: build the world once from the world seed, then per
 * period accumulate fresh requests, refit the learning schemes on the
 * cumulative log, re-optimize their placements, and score every scheme
 * against the ground truth. Perfect-information schemes are optimized once
 * (unless the topology is redrawn per period).
 */
TimeSeries run_schedule(const SimConfig& config);

} // namespace d2dcache

#endif // D2DCACHE_SIM_HPP_
