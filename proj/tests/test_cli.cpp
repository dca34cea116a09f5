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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "d2dcache/io.hpp"

using namespace d2dcache;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "d2dcache_cli_test";
    fs::create_directories(dir);
    const fs::path out_path = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err_path = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;

    const std::string cmd = std::string(D2D_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());

    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_text_file(out_path.string());
    result.err = read_text_file(err_path.string());
    return result;
}

fs::path sandbox() {
    const fs::path dir = fs::temp_directory_path() / "d2dcache_cli_work";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

double value_after_colon(const std::string& text) {
    const auto pos = text.rfind(": ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + 2));
}

} // namespace

TEST_CASE("synth writes the world and reports similarity") {
    const fs::path dir = sandbox();
    write_text_file((dir / "cfg.json").string(),
                    R"({"k": 8, "f": 12, "alpha": 0.5, "beta": 0.6, "side": 300.0, "r_c": 80.0})");

    const auto result =
        run_cli("synth --config " + (dir / "cfg.json").string() + " --out " +
                (dir / "world").string());
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(dir / "world" / "model.json"));
    CHECK(fs::exists(dir / "world" / "topology.json"));
    const double sim = value_after_colon(result.out);
    CHECK(sim > 0.0);
    CHECK(sim <= 1.0 + 1e-12);
}

TEST_CASE("synth reports similarity exactly one for identical preferences") {
    const fs::path dir = sandbox();
    write_text_file((dir / "cfg.json").string(),
                    R"({"k": 6, "f": 10, "alpha": 1.0, "beta": 0.6, "side": 300.0, "r_c": 80.0})");
    const auto result =
        run_cli("synth --config " + (dir / "cfg.json").string() + " --out " +
                (dir / "world").string());
    CHECK(result.exit_code == 0);
    CHECK(value_after_colon(result.out) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("synth rejects an out-of-range alpha with the constraint") {
    const fs::path dir = sandbox();
    write_text_file((dir / "cfg.json").string(), R"({"k": 8, "alpha": 1.5})");
    const auto result =
        run_cli("synth --config " + (dir / "cfg.json").string() + " --out " +
                dir.string());
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("(0, 1]") != std::string::npos);
}

TEST_CASE("optimize prints the objective and honors the scheme flag") {
    const fs::path dir = sandbox();
    write_text_file((dir / "cfg.json").string(),
                    R"({"k": 8, "f": 12, "alpha": 1.0, "beta": 0.6, "side": 300.0, "r_c": 100.0})");
    REQUIRE(run_cli("synth --config " + (dir / "cfg.json").string() + " --out " +
                    (dir / "world").string())
                .exit_code == 0);
    const std::string world = " --model " + (dir / "world" / "model.json").string() +
                              " --topology " + (dir / "world" / "topology.json").string();

    SUBCASE("zero capacity scores zero") {
        const auto result = run_cli("optimize" + world + " -M 0 --out " +
                                    (dir / "p0.json").string());
        CHECK(result.exit_code == 0);
        CHECK(value_after_colon(result.out) == 0.0);
    }
    SUBCASE("identical preferences make S1 and S2 agree") {
        const auto s1 = run_cli("optimize" + world + " -M 2 --scheme S1 --out " +
                                (dir / "p1.json").string());
        const auto s2 = run_cli("optimize" + world + " -M 2 --scheme S2 --out " +
                                (dir / "p2.json").string());
        CHECK(s1.exit_code == 0);
        CHECK(s2.exit_code == 0);
        CHECK(value_after_colon(s1.out) ==
              doctest::Approx(value_after_colon(s2.out)).epsilon(1e-9));
    }
    SUBCASE("capacity above the catalog is a usage error") {
        const auto result = run_cli("optimize" + world + " -M 13");
        CHECK(result.exit_code == 2);
    }
    SUBCASE("unknown scheme is a usage error") {
        const auto result = run_cli("optimize" + world + " -M 2 --scheme S3");
        CHECK(result.exit_code == 2);
    }
}

TEST_CASE("optimize reproduces the two-user fixture objective") {
    const fs::path dir = sandbox();
    const json model = {
        {"K", 2},
        {"F", 3},
        {"alpha", 0.5},
        {"beta", 0.0},
        {"w", json::array({0.6, 0.4})},
        {"Q", json::array({json::array({0.5, 0.3, 0.2}), json::array({0.2, 0.3, 0.5})})}};
    // users far apart: adjacency is the identity
    const json topo = {{"side", 300.0},
                       {"rc", 1.0},
                       {"positions", json::array({json::array({0.0, 0.0}),
                                                  json::array({200.0, 0.0})})}};
    write_text_file((dir / "model.json").string(), model.dump());
    write_text_file((dir / "topo.json").string(), topo.dump());

    const auto result = run_cli("optimize --model " + (dir / "model.json").string() +
                                " --topology " + (dir / "topo.json").string() +
                                " -M 1 --out " + (dir / "placement.json").string());
    CHECK(result.exit_code == 0);
    CHECK(value_after_colon(result.out) == doctest::Approx(0.5).epsilon(1e-12));

    const json placement = json::parse(read_text_file((dir / "placement.json").string()));
    CHECK(placement.at("placements") ==
          json::array({json::array({0, 0}), json::array({1, 2})}));
}

TEST_CASE("learn fits, reports, and replays byte-identically") {
    const fs::path dir = sandbox();
    write_text_file((dir / "req.csv").string(),
                    "user,file,count\n0,0,40\n0,1,10\n1,1,30\n1,2,20\n2,0,15\n2,2,35\n");
    const std::string base = "learn --requests " + (dir / "req.csv").string();

    SUBCASE("single topic converges immediately") {
        const auto result =
            run_cli(base + " --topics 1 --out " + (dir / "fit1").string());
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("iterations: ") != std::string::npos);
        const auto iters = std::stoul(
            result.out.substr(result.out.rfind("iterations: ") + 12));
        CHECK(iters <= 2);
    }
    SUBCASE("same seed, same bytes") {
        REQUIRE(run_cli(base + " --topics 3 --seed 5 --out " + (dir / "a").string())
                    .exit_code == 0);
        REQUIRE(run_cli(base + " --topics 3 --seed 5 --out " + (dir / "b").string())
                    .exit_code == 0);
        CHECK(read_text_file((dir / "a" / "plsa.json").string()) ==
              read_text_file((dir / "b" / "plsa.json").string()));
        CHECK(read_text_file((dir / "a" / "predicted.json").string()) ==
              read_text_file((dir / "b" / "predicted.json").string()));
    }
    SUBCASE("empty log is a usage error") {
        write_text_file((dir / "empty.csv").string(), "user,file,count\n");
        const auto result = run_cli("learn --requests " + (dir / "empty.csv").string());
        CHECK(result.exit_code == 2);
    }
}

TEST_CASE("learn --baseline prints the frequency stats verbatim") {
    const fs::path dir = sandbox();
    write_text_file((dir / "req.csv").string(), "user,file,count\n0,0,2\n0,1,2\n1,1,4\n");
    const auto result = run_cli("learn --requests " + (dir / "req.csv").string() +
                                " --baseline --out " + dir.string());
    CHECK(result.exit_code == 0);

    const json stats = json::parse(result.out);
    CHECK(stats.at("Q_hat") ==
          json::array({json::array({0.5, 0.5}), json::array({0.0, 1.0})}));
    CHECK(stats.at("w_hat") == json::array({0.5, 0.5}));
    CHECK(stats.at("p_hat") == json::array({0.25, 0.75}));
    CHECK(result.out ==
          read_text_file((dir / "predicted.json").string()).substr(
              0, result.out.size()));
}

TEST_CASE("simulate writes the series, manifest, and replays byte-identically") {
    const fs::path dir = sandbox();
    write_text_file(
        (dir / "cfg.json").string(),
        R"({"k": 6, "f": 10, "m": 1, "z": 2, "alpha": 0.4, "beta": 0.6,
            "side": 200.0, "r_c": 90.0, "request_rate": 1.0, "period_seconds": 50.0,
            "num_periods": 2, "schemes": ["S1-perfect", "S1-pLSA"]})");

    const auto first = run_cli("simulate --config " + (dir / "cfg.json").string() +
                               " --out " + (dir / "ts.csv").string());
    CHECK(first.exit_code == 0);

    const std::string csv = read_text_file((dir / "ts.csv").string());
    std::size_t rows = 0;
    for (char c : csv) rows += (c == '\n');
    CHECK(rows == 1 + 2 * 2); // header + periods x schemes

    const json manifest =
        json::parse(read_text_file((dir / "ts.manifest.json").string()));
    CHECK(manifest.at("config").at("k") == 6);
    CHECK(manifest.contains("version"));

    const auto second = run_cli("simulate --config " + (dir / "cfg.json").string() +
                                " --out " + (dir / "ts2.csv").string());
    CHECK(second.exit_code == 0);
    CHECK(read_text_file((dir / "ts2.csv").string()) == csv);
}

TEST_CASE("simulate rejects unknown schemes listing the valid names") {
    const fs::path dir = sandbox();
    write_text_file((dir / "cfg.json").string(),
                    R"({"k": 6, "f": 10, "schemes": ["S1-perfect", "S7-oracle"]})");
    const auto result = run_cli("simulate --config " + (dir / "cfg.json").string() +
                                " --out " + (dir / "ts.csv").string());
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("S7-oracle") != std::string::npos);
    CHECK(result.err.find("S1-pLSA") != std::string::npos);
    CHECK(result.err.find("S2-baseline") != std::string::npos);
}

TEST_CASE("missing input files are usage errors") {
    CHECK(run_cli("synth --config /nonexistent/cfg.json").exit_code == 2);
    CHECK(run_cli("learn --requests /nonexistent/req.csv").exit_code == 2);
}
