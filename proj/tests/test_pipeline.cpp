// Copyright 2026 The qtransit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qtransit/instances.hpp"
#include "qtransit/pipeline.hpp"

using namespace qtransit;
namespace fs = std::filesystem;

namespace {

SweepConfig small_config() {
    SweepConfig c;
    c.instance = "benchmark:flp";
    c.m_set = {0, 1, 4};
    c.p_set = {1, 2};
    c.shots = 2000;
    c.budget = 25;
    c.seed = 99;
    c.workers = 1;
    return c;
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string &args) {
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / "qtransit_cli_stdout.txt";
    const fs::path err = dir / "qtransit_cli_stderr.txt";
    std::string cmd = std::string(QTRANSIT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

}  // namespace

TEST(Config, DefaultsMatchTheDocumentedGrid) {
    SweepConfig c;
    EXPECT_EQ(c.n_steps, 10);
    EXPECT_EQ(c.total_time, 1.0);
    EXPECT_EQ(c.m_set.size(), 7U);
    EXPECT_EQ(c.p_set.size(), 6U);
    EXPECT_EQ(c.shots, 10000U);
    EXPECT_EQ(c.eta, 0.99);
    EXPECT_EQ(expected_row_count(c), 91U);
}

TEST(Config, JsonRoundTripIsCanonical) {
    auto c = small_config();
    auto j = c.to_json();
    EXPECT_EQ(SweepConfig::from_json(j).to_json().dump(), j.dump());
    EXPECT_EQ(SweepConfig::from_json(nlohmann::json::object()).to_json(), SweepConfig{}.to_json());
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(SweepConfig::from_json({{"m_sets", {1}}}), std::invalid_argument);
    EXPECT_THROW(SweepConfig::from_json({{"m_set", {11}}}), std::invalid_argument);
    EXPECT_THROW(SweepConfig::from_json({{"variants", {"qaoa"}}}), std::invalid_argument);
    EXPECT_THROW(SweepConfig::from_json({{"p_set", nlohmann::json::array()}}), std::invalid_argument);
    EXPECT_NO_THROW(SweepConfig::from_json({{"p_set", nlohmann::json::array()}, {"variants", {"aqc-trot"}}}));
    EXPECT_THROW(SweepConfig::from_json({{"topology", "ring"}}), std::invalid_argument);
}

TEST(Workers, EnvironmentOverride) {
    ::setenv("QTRANSIT_WORKERS", "3", 1);
    EXPECT_EQ(resolve_workers(7), 3);
    ::unsetenv("QTRANSIT_WORKERS");
    EXPECT_EQ(resolve_workers(7), 7);
    EXPECT_GE(resolve_workers(0), 1);
}

TEST(Sweep, RowsOrderedAndComplete) {
    auto cfg = small_config();
    auto out = run_sweep(cfg);
    ASSERT_EQ(out.rows.size(), expected_row_count(cfg));
    EXPECT_EQ(out.rows.size(), 3U + 3 * 2 * 2);
    EXPECT_EQ(out.rows[0].metrics.variant, "anneal");
    EXPECT_EQ(out.rows[1].metrics.variant, "aqc-trot");
    EXPECT_EQ(out.rows[1].metrics.m, 1);
    EXPECT_EQ(out.rows[3].metrics.variant, "aqc-qaoa");
    EXPECT_EQ(out.rows.back().metrics.variant, "aqc-lcqaoa");
    EXPECT_EQ(out.rows.back().metrics.m, 4);
    EXPECT_EQ(out.rows.back().metrics.p, 2);
    for (const auto &r : out.rows) {
        EXPECT_TRUE(r.metrics.error.empty()) << r.metrics.error;
        if (r.metrics.m == 0) EXPECT_EQ(r.metrics.prefix_fidelity, 1.0);
        EXPECT_LE(r.metrics.unique_feasible, r.metrics.feasible_count);
        EXPECT_LE(r.metrics.feasible_count, cfg.shots);
        if (r.metrics.feasible_count > 0) EXPECT_GE(*r.metrics.best_rank, 1);
    }
    // Every tail at the same m shares one compressed prefix.
    for (const auto &a : out.rows)
        for (const auto &b : out.rows)
            if (a.metrics.m == b.metrics.m) EXPECT_EQ(a.metrics.prefix_fidelity, b.metrics.prefix_fidelity);
    EXPECT_EQ(out.diagnostics.size(), 3U);
    EXPECT_NEAR(out.diagnostics[0].driver_energy, 12.0, 1e-9);
    EXPECT_EQ(out.to_json()["config"], cfg.to_json());
}

TEST(Sweep, FeasibleObjectivesRespectTheOptimum) {
    auto cfg = small_config();
    auto bp = encode(resolve_instance(cfg.instance));
    auto opt = brute_force(to_qubo(bp), [&](Basis x) { return is_feasible(bp, x); });
    const double best = bp.objective(opt.best_bitstring);
    for (const auto &r : run_sweep(cfg).rows) {
        if (r.metrics.avg_objective_feasible) EXPECT_GE(*r.metrics.avg_objective_feasible, best - 1e-12);
    }
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
    auto cfg = small_config();
    cfg.m_set = {0, 2};
    cfg.p_set = {1};
    const std::string a = run_sweep(cfg).csv();
    cfg.workers = 3;
    EXPECT_EQ(run_sweep(cfg).csv(), a);
}

TEST(Sweep, TrotOnlyVariant) {
    auto cfg = small_config();
    cfg.variants = {"aqc-trot"};
    auto out = run_sweep(cfg);
    ASSERT_EQ(out.rows.size(), 3U);
    EXPECT_EQ(out.rows[0].metrics.variant, "anneal");
    EXPECT_EQ(out.rows[2].metrics.variant, "aqc-trot");
}

TEST(Sweep, WritesCsvAndJson) {
    auto cfg = small_config();
    cfg.m_set = {0};
    cfg.p_set = {1};
    auto out = run_sweep(cfg);
    const fs::path dir = fs::temp_directory_path() / "qtransit_sweep_test";
    fs::create_directories(dir);
    write_sweep(out, (dir / "rows.csv").string());
    EXPECT_EQ(slurp(dir / "rows.csv"), out.csv());
    auto j = nlohmann::json::parse(slurp(dir / "rows.json"));
    EXPECT_EQ(j["rows"].size(), out.rows.size());
    for (const auto &row : j["rows"]) {
        EXPECT_EQ(row["d2q"], row["d2q_all_to_all"]);
        EXPECT_GE(row["d2q_linear"].get<int>(), row["d2q_all_to_all"].get<int>());
    }
    EXPECT_TRUE(fs::exists(dir / "rows.diagnostics.csv"));
    fs::remove_all(dir);
}

TEST(Cli, EncodeReportsVariableCount) {
    auto r = run_cli("--format csv encode --instance benchmark:flp");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("flp,12,"), std::string::npos);
    auto j = run_cli("encode --instance benchmark:tsp");
    EXPECT_EQ(nlohmann::json::parse(j.out)["num_vars"], 16);
}

TEST(Cli, SolveExact) {
    auto r = run_cli("solve-exact --instance benchmark:tsp");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["feasible"].get<bool>());
    EXPECT_EQ(j["feasible_count"], 24);
    EXPECT_EQ(j["tour"].size(), 5U);
}

TEST(Cli, GenerateThenEncodeFromFile) {
    const fs::path p = fs::temp_directory_path() / "qtransit_cli_instance.json";
    auto g = run_cli("--seed 5 --out " + p.string() + " generate --kind flp --size 3 --second 2");
    ASSERT_EQ(g.code, 0);
    auto r = run_cli("--format csv encode --instance " + p.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("flp,8,"), std::string::npos);
    fs::remove(p);
}

TEST(Cli, UsageErrorsExitWithOne) {
    auto r = run_cli("--format xml encode");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "usage");
    EXPECT_EQ(run_cli("frobnicate").code, 1);
    EXPECT_EQ(run_cli("compress --instance benchmark:flp --m 11").code, 1);
}

TEST(Cli, RuntimeErrorsExitWithTwo) {
    auto r = run_cli("encode --instance /nonexistent/instance.json");
    EXPECT_EQ(r.code, 2);
    auto j = nlohmann::json::parse(r.err);
    EXPECT_EQ(j["error"], "runtime");
    EXPECT_EQ(j["exit_code"], 2);
}

TEST(Cli, CompressAndAnneal) {
    auto c = run_cli("--format csv compress --instance benchmark:flp --m 2");
    ASSERT_EQ(c.code, 0);
    EXPECT_NE(c.out.find("\n2,1,4,"), std::string::npos);
    auto a = run_cli("anneal --instance benchmark:flp");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(nlohmann::json::parse(a.out)["variant"], "anneal");
}

TEST(Cli, DiagnoseCoversEveryStep) {
    auto r = run_cli("--format csv diagnose --instance benchmark:flp --steps 4");
    ASSERT_EQ(r.code, 0);
    int lines = 0;
    for (char ch : r.out) lines += ch == '\n';
    EXPECT_EQ(lines, 1 + 5);
}
