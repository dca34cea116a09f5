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

#ifndef D2DCACHE_IO_HPP_
#define D2DCACHE_IO_HPP_

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "d2dcache/offload.hpp"
#include "d2dcache/plsa.hpp"
#include "d2dcache/prefs.hpp"
#include "d2dcache/sim.hpp"
#include "d2dcache/topology.hpp"

namespace d2dcache {

//! Malformed configuration or input document; the message names the
//! offending key. CLI maps this to the usage exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- JSON documents -------------------------------------------------------

nlohmann::json model_to_json(const PreferenceModel& model);
//! Rebuilds p from (F, beta); feature draws are not part of the document.
PreferenceModel model_from_json(const nlohmann::json& j);

nlohmann::json topology_to_json(const Topology& topo);
//! Adjacency is recomputed from positions and rc; rc = -1 denotes full mesh.
Topology topology_from_json(const nlohmann::json& j);

nlohmann::json caching_to_json(const CachingMatrix& cache);
CachingMatrix caching_from_json(const nlohmann::json& j, std::size_t num_users,
                                std::size_t num_files);

nlohmann::json plsa_params_to_json(const plsa::Params& params);
plsa::Params plsa_params_from_json(const nlohmann::json& j);

nlohmann::json predicted_to_json(const plsa::PredictedStats& stats);
plsa::PredictedStats predicted_from_json(const nlohmann::json& j);

//! Parses a run configuration; unknown keys and out-of-range values throw
//! ConfigError. Missing keys take the defaults from SimConfig.
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const SimConfig& config);

// -- CSV ------------------------------------------------------------------

//! `user,file,count` rows (0-based indices) for the nonzero cells.
std::string request_log_to_csv(const RequestLog& requests);
//! Dimensions are inferred from the largest indices unless given.
RequestLog request_log_from_csv(const std::string& text,
                                std::size_t num_users = 0,
                                std::size_t num_files = 0);

//! `period,scheme,p_off` rows, period-major, 17 significant digits.
std::string time_series_to_csv(const TimeSeries& series);

// -- files ----------------------------------------------------------------

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

//! Formats a double with 17 significant digits ("%.17g").
std::string format_full(double value);

} // namespace d2dcache

#endif // D2DCACHE_IO_HPP_
