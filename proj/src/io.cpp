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

#include "d2dcache/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace d2dcache {

using nlohmann::json;

std::string format_full(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

// -- PreferenceModel ------------------------------------------------------

nlohmann::json model_to_json(const PreferenceModel& model) {
    json rows = json::array();
    for (std::size_t k = 0; k < model.num_users; ++k) {
        json row = json::array();
        for (double v : model.Q.row(k)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return json{{"K", model.num_users}, {"F", model.num_files},
                {"alpha", model.alpha}, {"beta", model.beta},
                {"w", model.w},         {"Q", std::move(rows)}};
}

PreferenceModel model_from_json(const nlohmann::json& j) {
    for (const char* key : {"K", "F", "alpha", "beta", "w", "Q"})
        if (!j.contains(key))
            throw ConfigError(std::string("model document: missing key '") + key + "'");

    PreferenceModel model;
    model.num_users = j.at("K").get<std::size_t>();
    model.num_files = j.at("F").get<std::size_t>();
    model.alpha = j.at("alpha").get<double>();
    model.beta = j.at("beta").get<double>();
    model.w = j.at("w").get<std::vector<double>>();
    if (model.w.size() != model.num_users)
        throw ConfigError("model document: key 'w' has wrong length");

    const auto& rows = j.at("Q");
    if (!rows.is_array() || rows.size() != model.num_users)
        throw ConfigError("model document: key 'Q' has wrong shape");
    model.Q = Matrix(model.num_users, model.num_files);
    for (std::size_t k = 0; k < model.num_users; ++k) {
        const auto row = rows[k].get<std::vector<double>>();
        if (row.size() != model.num_files)
            throw ConfigError("model document: key 'Q' has wrong shape");
        std::copy(row.begin(), row.end(), model.Q.row(k).begin());
    }
    model.p = zipf_popularity(model.num_files, model.beta);
    return model;
}

// -- Topology --------------------------------------------------------------

nlohmann::json topology_to_json(const Topology& topo) {
    json positions = json::array();
    for (const Point& pt : topo.positions())
        positions.push_back(json::array({pt.x, pt.y}));
    return json{{"side", topo.side()},
                {"rc", topo.is_full_mesh() ? -1.0 : topo.collaboration_distance()},
                {"positions", std::move(positions)}};
}

Topology topology_from_json(const nlohmann::json& j) {
    for (const char* key : {"side", "rc", "positions"})
        if (!j.contains(key))
            throw ConfigError(std::string("topology document: missing key '") + key + "'");

    const double side = j.at("side").get<double>();
    const double rc = j.at("rc").get<double>();
    std::vector<Point> positions;
    for (const auto& pair : j.at("positions")) {
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError("topology document: positions must be [x, y] pairs");
        positions.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    if (rc < 0.0) return Topology::full_mesh(std::move(positions), side);
    return Topology::build(std::move(positions), side, rc);
}

// -- CachingMatrix ---------------------------------------------------------

nlohmann::json caching_to_json(const CachingMatrix& cache) {
    json placements = json::array();
    for (const auto& [user, file] : cache.placements())
        placements.push_back(json::array({user, file}));
    return json{{"M", cache.capacity()}, {"placements", std::move(placements)}};
}

CachingMatrix caching_from_json(const nlohmann::json& j, std::size_t num_users,
                                std::size_t num_files) {
    for (const char* key : {"M", "placements"})
        if (!j.contains(key))
            throw ConfigError(std::string("placement document: missing key '") + key + "'");

    CachingMatrix cache(num_users, num_files, j.at("M").get<std::size_t>());
    for (const auto& pair : j.at("placements")) {
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError("placement document: placements must be [user, file] pairs");
        cache.place(pair[0].get<std::size_t>(), pair[1].get<std::size_t>());
    }
    return cache;
}

// -- pLSA ------------------------------------------------------------------

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (double v : m.row(r)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw ConfigError(std::string(what) + ": expected a non-empty matrix");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = j[r].get<std::vector<double>>();
        if (row.size() != cols)
            throw ConfigError(std::string(what) + ": ragged matrix");
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

} // namespace

nlohmann::json plsa_params_to_json(const plsa::Params& params) {
    return json{{"Z", params.num_topics},
                {"Pz", params.Pz},
                {"Puz", matrix_to_json(params.Puz)},
                {"Pfz", matrix_to_json(params.Pfz)},
                {"loglik_trace", params.loglik_trace}};
}

plsa::Params plsa_params_from_json(const nlohmann::json& j) {
    for (const char* key : {"Z", "Pz", "Puz", "Pfz", "loglik_trace"})
        if (!j.contains(key))
            throw ConfigError(std::string("plsa document: missing key '") + key + "'");

    plsa::Params params;
    params.num_topics = j.at("Z").get<std::size_t>();
    params.Pz = j.at("Pz").get<std::vector<double>>();
    params.Puz = matrix_from_json(j.at("Puz"), "plsa document Puz");
    params.Pfz = matrix_from_json(j.at("Pfz"), "plsa document Pfz");
    params.loglik_trace = j.at("loglik_trace").get<std::vector<double>>();
    params.num_users = params.Puz.rows();
    params.num_files = params.Pfz.rows();
    if (params.Pz.size() != params.num_topics ||
        params.Puz.cols() != params.num_topics ||
        params.Pfz.cols() != params.num_topics)
        throw ConfigError("plsa document: inconsistent topic count");
    return params;
}

nlohmann::json predicted_to_json(const plsa::PredictedStats& stats) {
    return json{{"w_hat", stats.w_hat},
                {"Q_hat", matrix_to_json(stats.Q_hat)},
                {"p_hat", stats.p_hat}};
}

plsa::PredictedStats predicted_from_json(const nlohmann::json& j) {
    for (const char* key : {"w_hat", "Q_hat", "p_hat"})
        if (!j.contains(key))
            throw ConfigError(std::string("stats document: missing key '") + key + "'");
    plsa::PredictedStats stats;
    stats.w_hat = j.at("w_hat").get<std::vector<double>>();
    stats.Q_hat = matrix_from_json(j.at("Q_hat"), "stats document Q_hat");
    stats.p_hat = j.at("p_hat").get<std::vector<double>>();
    return stats;
}

// -- SimConfig ---------------------------------------------------------------

nlohmann::json sim_config_to_json(const SimConfig& config) {
    json schemes = json::array();
    for (Scheme s : config.schemes) schemes.push_back(scheme_name(s));
    return json{{"k", config.num_users},
                {"f", config.num_files},
                {"m", config.cache_size},
                {"z", config.num_topics},
                {"beta", config.beta},
                {"alpha", config.alpha},
                {"side", config.side},
                {"r_c", config.rc},
                {"request_rate", config.request_rate},
                {"period_seconds", config.period_seconds},
                {"num_periods", config.num_periods},
                {"seeds", json{{"world", config.seeds.world},
                               {"traffic", config.seeds.traffic},
                               {"learner", config.seeds.learner}}},
                {"schemes", std::move(schemes)},
                {"epsilon", config.epsilon},
                {"max_iter", config.max_iter},
                {"redraw_topology", config.redraw_topology}};
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
    static const char* known[] = {"k",
                                  "f",
                                  "m",
                                  "z",
                                  "beta",
                                  "alpha",
                                  "side",
                                  "r_c",
                                  "request_rate",
                                  "period_seconds",
                                  "num_periods",
                                  "seeds",
                                  "schemes",
                                  "epsilon",
                                  "max_iter",
                                  "redraw_topology"};
    if (!j.is_object())
        throw ConfigError("config: expected a JSON object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* key : known) ok = ok || item.key() == key;
        if (!ok)
            throw ConfigError("config: unknown key '" + item.key() + "'");
    }

    SimConfig config;
    auto take_count = [&j](const char* key, std::size_t& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number_unsigned() || j.at(key).get<std::uint64_t>() == 0)
            throw ConfigError(std::string("config key '") + key +
                              "': must be a positive count");
        out = j.at(key).get<std::size_t>();
    };
    auto take_positive = [&j](const char* key, double& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number() || !(j.at(key).get<double>() > 0.0))
            throw ConfigError(std::string("config key '") + key + "': must be positive");
        out = j.at(key).get<double>();
    };

    take_count("k", config.num_users);
    take_count("f", config.num_files);
    take_count("m", config.cache_size);
    take_count("z", config.num_topics);
    take_count("num_periods", config.num_periods);
    take_count("max_iter", config.max_iter);
    take_positive("side", config.side);
    take_positive("r_c", config.rc);
    take_positive("request_rate", config.request_rate);
    take_positive("period_seconds", config.period_seconds);
    take_positive("epsilon", config.epsilon);

    if (j.contains("beta")) {
        config.beta = j.at("beta").get<double>();
        if (!(config.beta >= 0.0))
            throw ConfigError("config key 'beta': must be non-negative");
    }
    if (j.contains("alpha")) {
        config.alpha = j.at("alpha").get<double>();
        if (!(config.alpha > 0.0) || config.alpha > 1.0)
            throw ConfigError("config key 'alpha': must lie in (0, 1]");
    }
    if (j.contains("redraw_topology")) {
        if (!j.at("redraw_topology").is_boolean())
            throw ConfigError("config key 'redraw_topology': must be a boolean");
        config.redraw_topology = j.at("redraw_topology").get<bool>();
    }
    if (j.contains("seeds")) {
        const auto& seeds = j.at("seeds");
        if (!seeds.is_object())
            throw ConfigError("config key 'seeds': must be an object");
        for (const auto& item : seeds.items())
            if (item.key() != "world" && item.key() != "traffic" && item.key() != "learner")
                throw ConfigError("config: unknown key 'seeds." + item.key() + "'");
        if (seeds.contains("world")) config.seeds.world = seeds.at("world").get<std::uint64_t>();
        if (seeds.contains("traffic"))
            config.seeds.traffic = seeds.at("traffic").get<std::uint64_t>();
        if (seeds.contains("learner"))
            config.seeds.learner = seeds.at("learner").get<std::uint64_t>();
    }
    if (j.contains("schemes")) {
        if (!j.at("schemes").is_array())
            throw ConfigError("config key 'schemes': must be an array of scheme names");
        config.schemes.clear();
        for (const auto& name : j.at("schemes")) {
            try {
                config.schemes.push_back(parse_scheme(name.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config key 'schemes': ") + e.what());
            }
        }
        if (config.schemes.empty())
            throw ConfigError("config key 'schemes': must not be empty");
    }

    if (config.cache_size > config.num_files)
        throw ConfigError("config key 'm': cache size exceeds catalog size 'f'");
    return config;
}

// -- CSV ---------------------------------------------------------------------

std::string request_log_to_csv(const RequestLog& requests) {
    std::string out = "user,file,count\n";
    for (std::size_t k = 0; k < requests.num_users; ++k)
        for (std::size_t f = 0; f < requests.num_files; ++f)
            if (requests.at(k, f) > 0) {
                out += std::to_string(k);
                out += ',';
                out += std::to_string(f);
                out += ',';
                out += std::to_string(requests.at(k, f));
                out += '\n';
            }
    return out;
}

RequestLog request_log_from_csv(const std::string& text, std::size_t num_users,
                                std::size_t num_files) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("requests CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "user,file,count")
        throw ConfigError("requests CSV: expected header 'user,file,count'");

    struct Entry {
        std::size_t user, file;
        unsigned long long count;
    };
    std::vector<Entry> entries;
    std::size_t max_user = 0, max_file = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Entry e{};
        char extra;
        if (std::sscanf(line.c_str(), "%zu,%zu,%llu%c", &e.user, &e.file, &e.count,
                        &extra) != 3)
            throw ConfigError("requests CSV: malformed line " + std::to_string(line_no));
        max_user = std::max(max_user, e.user);
        max_file = std::max(max_file, e.file);
        entries.push_back(e);
    }

    if (num_users == 0) num_users = entries.empty() ? 0 : max_user + 1;
    if (num_files == 0) num_files = entries.empty() ? 0 : max_file + 1;
    RequestLog log(num_users, num_files);
    for (const Entry& e : entries) {
        if (e.user >= num_users || e.file >= num_files)
            throw ConfigError("requests CSV: index out of range");
        log.at(e.user, e.file) += e.count;
    }
    return log;
}

std::string time_series_to_csv(const TimeSeries& series) {
    std::string out = "period,scheme,p_off\n";
    const std::size_t periods = series.values.empty() ? 0 : series.values[0].size();
    for (std::size_t t = 0; t < periods; ++t)
        for (std::size_t s = 0; s < series.schemes.size(); ++s) {
            out += std::to_string(t);
            out += ',';
            out += scheme_name(series.schemes[s]);
            out += ',';
            out += format_full(series.values[s][t]);
            out += '\n';
        }
    return out;
}

// -- files ---------------------------------------------------------------------

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write file: " + path);
    out << text;
}

} // namespace d2dcache
