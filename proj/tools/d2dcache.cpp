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

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "d2dcache/io.hpp"
#include "d2dcache/offload.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/plsa.hpp"
#include "d2dcache/prefs.hpp"
#include "d2dcache/rng.hpp"
#include "d2dcache/sim.hpp"
#include "d2dcache/topology.hpp"
#include "d2dcache/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    try {
        return json::parse(d2dcache::read_text_file(path));
    } catch (const json::exception& e) {
        throw d2dcache::ConfigError(path + ": " + e.what());
    }
}

void cmd_synth(const std::string& config_path, const std::string& out_dir) {
    const d2dcache::SimConfig config = d2dcache::sim_config_from_json(load_json(config_path));

    const d2dcache::PreferenceModel model = d2dcache::synth_preferences(
        config.num_files, config.num_users, config.beta, config.alpha,
        d2dcache::mix_seed(config.seeds.world, 0));
    const d2dcache::Topology topo = d2dcache::Topology::build(
        d2dcache::place_users(config.num_users, config.side,
                              d2dcache::mix_seed(config.seeds.world, 1)),
        config.side, config.rc);

    fs::create_directories(out_dir);
    d2dcache::write_text_file((fs::path(out_dir) / "model.json").string(),
                              d2dcache::model_to_json(model).dump(2) + "\n");
    d2dcache::write_text_file((fs::path(out_dir) / "topology.json").string(),
                              d2dcache::topology_to_json(topo).dump(2) + "\n");

    if (config.num_users >= 2)
        std::printf("average cosine similarity: %s\n",
                    d2dcache::format_full(d2dcache::average_similarity(model.Q)).c_str());
    else
        std::printf("average cosine similarity: n/a (single user)\n");
}

void cmd_optimize(const std::string& model_path, const std::string& topology_path,
                  std::size_t capacity, const std::string& scheme,
                  const std::string& out_path) {
    const d2dcache::PreferenceModel model = d2dcache::model_from_json(load_json(model_path));
    const d2dcache::Topology topo = d2dcache::topology_from_json(load_json(topology_path));

    if (topo.num_users() != model.num_users)
        throw d2dcache::ConfigError("model and topology disagree on the user count");
    if (capacity > model.num_files)
        throw d2dcache::ConfigError("cache size M exceeds the catalog size F");
    if (scheme != "S1" && scheme != "S2")
        throw d2dcache::ConfigError("unknown scheme '" + scheme + "'; valid schemes: S1, S2");

    d2dcache::CachingMatrix cache;
    if (scheme == "S1") {
        cache = d2dcache::greedy_cache(model.Q, model.w, topo, capacity);
    } else {
        const d2dcache::PopularityVector p =
            d2dcache::aggregate_popularity(model.Q, model.w);
        cache = d2dcache::popularity_cache(p, topo, capacity, model.num_users);
    }

    if (!out_path.empty()) {
        if (fs::path(out_path).has_parent_path())
            fs::create_directories(fs::path(out_path).parent_path());
        d2dcache::write_text_file(out_path, d2dcache::caching_to_json(cache).dump(2) + "\n");
    }
    std::printf("offloading probability: %s\n",
                d2dcache::format_full(
                    d2dcache::offloading_probability(model.Q, model.w, topo, cache))
                    .c_str());
}

void cmd_learn(const std::string& requests_path, std::size_t topics, double epsilon,
               std::size_t max_iter, std::size_t restarts, std::uint64_t seed,
               bool baseline, const std::string& out_dir) {
    const d2dcache::RequestLog requests =
        d2dcache::request_log_from_csv(d2dcache::read_text_file(requests_path));
    if (requests.total() == 0)
        throw d2dcache::ConfigError(requests_path + ": no requests");

    fs::create_directories(out_dir);

    if (baseline) {
        const d2dcache::plsa::PredictedStats stats =
            d2dcache::plsa::frequency_baseline(requests);
        const json doc = d2dcache::predicted_to_json(stats);
        d2dcache::write_text_file((fs::path(out_dir) / "predicted.json").string(),
                                  doc.dump(2) + "\n");
        std::printf("%s\n", doc.dump(2).c_str());
        return;
    }

    d2dcache::plsa::FitOptions options;
    options.epsilon = epsilon;
    options.max_iter = max_iter;
    options.restarts = restarts;
    const d2dcache::plsa::Params params =
        d2dcache::plsa::fit(requests, topics, options, seed);
    const d2dcache::plsa::PredictedStats stats = d2dcache::plsa::predict(params);

    d2dcache::write_text_file((fs::path(out_dir) / "plsa.json").string(),
                              d2dcache::plsa_params_to_json(params).dump(2) + "\n");
    d2dcache::write_text_file((fs::path(out_dir) / "predicted.json").string(),
                              d2dcache::predicted_to_json(stats).dump(2) + "\n");

    const double per_request =
        params.loglik_trace.back() / static_cast<double>(requests.total());
    std::printf("final per-request log-likelihood: %s\n",
                d2dcache::format_full(per_request).c_str());
    std::printf("iterations: %zu\n", params.loglik_trace.size());
}

void cmd_simulate(const std::string& config_path, const std::string& out_path) {
    const d2dcache::SimConfig config = d2dcache::sim_config_from_json(load_json(config_path));
    const d2dcache::TimeSeries series = d2dcache::run_schedule(config);

    if (fs::path(out_path).has_parent_path())
        fs::create_directories(fs::path(out_path).parent_path());
    d2dcache::write_text_file(out_path, d2dcache::time_series_to_csv(series));

    fs::path manifest_path(out_path);
    manifest_path.replace_extension(".manifest.json");
    const json manifest = {{"config", d2dcache::sim_config_to_json(config)},
                           {"version", d2dcache::kVersion}};
    d2dcache::write_text_file(manifest_path.string(), manifest.dump(2) + "\n");

    std::printf("wrote %zu periods x %zu schemes to %s\n",
                series.values.empty() ? 0 : series.values[0].size(),
                series.schemes.size(), out_path.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Device-to-device cache placement: synthetic preferences, greedy "
                 "placement, pLSA preference learning, multi-period simulation"};
    app.require_subcommand(1);

    std::string config_path, out_path = ".";
    auto* synth = app.add_subcommand("synth", "generate a preference model and topology");
    synth->add_option("--config", config_path, "run configuration (JSON)")->required();
    synth->add_option("--out", out_path, "output directory");

    std::string model_path, topology_path, scheme = "S1", placement_out = "placement.json";
    std::size_t capacity = 0;
    auto* optimize = app.add_subcommand("optimize", "optimize a cache placement");
    optimize->add_option("--model", model_path, "preference model (JSON)")->required();
    optimize->add_option("--topology", topology_path, "topology (JSON)")->required();
    optimize->add_option("-M,--cache-size", capacity, "files per user cache")->required();
    optimize->add_option("--scheme", scheme, "S1 (preferences) or S2 (popularity)");
    optimize->add_option("--out", placement_out, "placement output path (JSON)");

    std::string requests_path, learn_out = ".";
    std::size_t topics = 10, max_iter = 500, restarts = 1;
    double epsilon = 1e-6;
    std::uint64_t seed = 1;
    bool baseline = false;
    auto* learn = app.add_subcommand("learn", "fit request statistics from a request log");
    learn->add_option("--requests", requests_path, "request log (CSV user,file,count)")
        ->required();
    learn->add_option("--topics", topics, "number of latent topics");
    learn->add_option("--epsilon", epsilon, "per-request log-likelihood stop threshold");
    learn->add_option("--max-iter", max_iter, "iteration cap");
    learn->add_option("--restarts", restarts, "independent EM restarts");
    learn->add_option("--seed", seed, "initialization seed");
    learn->add_flag("--baseline", baseline, "frequency-count estimate instead of pLSA");
    learn->add_option("--out", learn_out, "output directory");

    std::string sim_config_path, sim_out = "timeseries.csv";
    auto* simulate = app.add_subcommand("simulate", "run the multi-period schedule");
    simulate->add_option("--config", sim_config_path, "run configuration (JSON)")
        ->required();
    simulate->add_option("--out", sim_out, "time-series output path (CSV)");

    try {
        app.parse(argc, argv);
        if (synth->parsed()) cmd_synth(config_path, out_path);
        if (optimize->parsed())
            cmd_optimize(model_path, topology_path, capacity, scheme, placement_out);
        if (learn->parsed())
            cmd_learn(requests_path, topics, epsilon, max_iter, restarts, seed, baseline,
                      learn_out);
        if (simulate->parsed()) cmd_simulate(sim_config_path, sim_out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const d2dcache::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
