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

#include "d2dcache/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d2dcache/offload.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/rng.hpp"

namespace d2dcache {

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes = {
        Scheme::S1Perfect, Scheme::S2Perfect,  Scheme::S1Plsa,
        Scheme::S2Plsa,    Scheme::S1Baseline, Scheme::S2Baseline,
    };
    return schemes;
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::S1Perfect: return "S1-perfect";
        case Scheme::S2Perfect: return "S2-perfect";
        case Scheme::S1Plsa: return "S1-pLSA";
        case Scheme::S2Plsa: return "S2-pLSA";
        case Scheme::S1Baseline: return "S1-baseline";
        case Scheme::S2Baseline: return "S2-baseline";
    }
    throw std::logic_error("scheme_name: unreachable");
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : all_schemes())
        if (scheme_name(s) == name) return s;
    std::string valid;
    for (Scheme s : all_schemes()) {
        if (!valid.empty()) valid += ", ";
        valid += scheme_name(s);
    }
    throw std::invalid_argument("unknown scheme '" + name + "'; valid schemes: " + valid);
}

std::uint64_t requests_per_period(const SimConfig& config) {
    return static_cast<std::uint64_t>(
        std::llround(config.request_rate * config.period_seconds));
}

RequestLog generate_requests(const PreferenceModel& model, std::uint64_t count,
                             std::uint64_t seed) {
    RequestLog log(model.num_users, model.num_files);
    if (count == 0) return log;

    const std::vector<double> user_cdf = cumulative(model.w);
    std::vector<std::vector<double>> file_cdf(model.num_users);
    for (std::size_t k = 0; k < model.num_users; ++k)
        file_cdf[k] = cumulative(model.Q.row(k));

    Rng rng(seed);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::size_t k = draw_categorical(user_cdf, rng);
        const std::size_t f = draw_categorical(file_cdf[k], rng);
        ++log.at(k, f);
    }
    return log;
}

namespace {

void validate_config(const SimConfig& config) {
    if (config.num_users == 0 || config.num_files == 0 || config.cache_size == 0 ||
        config.num_topics == 0 || config.num_periods == 0 || config.max_iter == 0)
        throw std::domain_error("run_schedule: all counts must be positive");
    if (!(config.request_rate > 0.0) || !(config.period_seconds > 0.0))
        throw std::domain_error("run_schedule: rates must be positive");
    if (!(config.alpha > 0.0) || config.alpha > 1.0)
        throw std::domain_error("run_schedule: alpha must lie in (0, 1]");
    if (!(config.side > 0.0) || !(config.rc > 0.0))
        throw std::domain_error("run_schedule: geometry must be positive");
    if (config.cache_size > config.num_files)
        throw std::domain_error("run_schedule: cache size exceeds catalog size");
    if (!(config.epsilon > 0.0))
        throw std::domain_error("run_schedule: epsilon must be positive");
    if (config.schemes.empty())
        throw std::domain_error("run_schedule: no schemes requested");
}

bool wants(const SimConfig& config, Scheme s) {
    return std::find(config.schemes.begin(), config.schemes.end(), s) !=
           config.schemes.end();
}

} // namespace

TimeSeries run_schedule(const SimConfig& config) {
    validate_config(config);

    const PreferenceModel model =
        synth_preferences(config.num_files, config.num_users, config.beta,
                          config.alpha, mix_seed(config.seeds.world, 0));
    Topology topo = Topology::build(
        place_users(config.num_users, config.side, mix_seed(config.seeds.world, 1)),
        config.side, config.rc);

    TimeSeries series;
    for (Scheme s : all_schemes())
        if (wants(config, s)) series.schemes.push_back(s);
    series.values.assign(series.schemes.size(), {});

    auto record = [&series](Scheme s, double value) {
        for (std::size_t i = 0; i < series.schemes.size(); ++i)
            if (series.schemes[i] == s) series.values[i].push_back(value);
    };

    auto score = [&](const CachingMatrix& cache) {
        // metric always uses the ground truth, never the estimates
        return offloading_probability(model.Q, model.w, topo, cache);
    };

    const bool want_plsa = wants(config, Scheme::S1Plsa) || wants(config, Scheme::S2Plsa);
    const bool want_baseline =
        wants(config, Scheme::S1Baseline) || wants(config, Scheme::S2Baseline);

    // Perfect-information placements do not depend on the request history;
    // compute them once unless the topology is redrawn each period.
    double s1_perfect = 0.0, s2_perfect = 0.0;
    if (!config.redraw_topology) {
        if (wants(config, Scheme::S1Perfect))
            s1_perfect = score(greedy_cache(model.Q, model.w, topo, config.cache_size));
        if (wants(config, Scheme::S2Perfect))
            s2_perfect = score(
                popularity_cache(model.p, topo, config.cache_size, config.num_users));
    }

    const std::uint64_t per_period = requests_per_period(config);
    RequestLog history(config.num_users, config.num_files);

    plsa::FitOptions fit_options;
    fit_options.epsilon = config.epsilon;
    fit_options.max_iter = config.max_iter;

    for (std::size_t period = 0; period < config.num_periods; ++period) {
        if (config.redraw_topology && period > 0) {
            topo = Topology::build(place_users(config.num_users, config.side,
                                               mix_seed(config.seeds.world, 1 + period)),
                                   config.side, config.rc);
        }
        if (config.redraw_topology) {
            if (wants(config, Scheme::S1Perfect))
                s1_perfect = score(greedy_cache(model.Q, model.w, topo, config.cache_size));
            if (wants(config, Scheme::S2Perfect))
                s2_perfect = score(
                    popularity_cache(model.p, topo, config.cache_size, config.num_users));
        }

        history.add(generate_requests(model, per_period,
                                      mix_seed(config.seeds.traffic, period)));

        if (wants(config, Scheme::S1Perfect)) record(Scheme::S1Perfect, s1_perfect);
        if (wants(config, Scheme::S2Perfect)) record(Scheme::S2Perfect, s2_perfect);

        if (want_plsa) {
            // one fit serves both pLSA schemes; they share (N, Z, seed)
            const plsa::Params params = plsa::fit(history, config.num_topics, fit_options,
                                                  config.seeds.learner + period);
            const plsa::PredictedStats stats = plsa::predict(params);
            if (wants(config, Scheme::S1Plsa))
                record(Scheme::S1Plsa,
                       score(greedy_cache(stats.Q_hat, stats.w_hat, topo,
                                          config.cache_size)));
            if (wants(config, Scheme::S2Plsa))
                record(Scheme::S2Plsa,
                       score(popularity_cache(stats.p_hat, topo, config.cache_size,
                                              config.num_users)));
        }

        if (want_baseline) {
            const plsa::PredictedStats stats = plsa::frequency_baseline(history);
            if (wants(config, Scheme::S1Baseline))
                record(Scheme::S1Baseline,
                       score(greedy_cache(stats.Q_hat, stats.w_hat, topo,
                                          config.cache_size)));
            if (wants(config, Scheme::S2Baseline))
                record(Scheme::S2Baseline,
                       score(popularity_cache(stats.p_hat, topo, config.cache_size,
                                              config.num_users)));
        }
    }
    return series;
}

} // namespace d2dcache
