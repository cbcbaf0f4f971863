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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtransit/aqc.hpp"
#include "qtransit/diagnostics.hpp"
#include "qtransit/instances.hpp"
#include "qtransit/pipeline.hpp"
#include "qtransit/simulator.hpp"

using nlohmann::json;
using namespace qtransit;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out;
    std::string format = "json";
};

void emit(const Globals &g, const std::string &text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + g.out + "'");
    f << text;
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string s;
    for (const auto &c : cells) s += (s.empty() ? "" : ",") + c;
    return s + "\n";
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

SweepConfig load_config(const Globals &g) {
    SweepConfig cfg;
    if (!g.config.empty()) {
        std::ifstream f(g.config);
        if (!f) throw UsageError("cannot read config '" + g.config + "'");
        json j;
        try {
            j = json::parse(f);
            cfg = SweepConfig::from_json(j);
        } catch (const std::exception &e) {
            throw UsageError(std::string("invalid config: ") + e.what());
        }
    }
    if (g.seed) cfg.seed = *g.seed;
    return cfg;
}

struct Problem {
    BinaryProgram bp;
    Qubo qubo;
    IsingHamiltonian cost;
};

Problem build_problem(const std::string &instance) {
    Problem p{encode(resolve_instance(instance)), {}, {}};
    p.qubo = to_qubo(p.bp);
    p.cost = qubo_to_ising(p.qubo);
    return p;
}

void cmd_generate(const Globals &g, const std::string &kind, int size, int second) {
    const std::uint64_t seed = g.seed.value_or(0);
    Instance inst;
    switch (problem_kind_from_string(kind)) {
        case ProblemKind::kTsp: inst = make_tsp(size, seed); break;
        case ProblemKind::kVrp: inst = make_vrp(size, second, seed); break;
        case ProblemKind::kFlp: inst = make_flp(size, second, seed); break;
    }
    emit(g, instance_to_json(inst).dump(2) + "\n");
}

void cmd_encode(const Globals &g, const std::string &instance) {
    Problem p = build_problem(instance);
    if (g.format == "csv") {
        std::string s = csv_row({"problem", "num_vars", "penalty_weight", "norm_factor", "constraints"});
        s += csv_row({to_string(p.bp.kind), std::to_string(p.bp.num_vars), num(p.qubo.penalty_weight),
                      num(p.qubo.norm_factor),
                      std::to_string(p.bp.eq_constraints.size() + p.bp.product_penalties.size())});
        emit(g, s);
        return;
    }
    json q = json::array();
    for (const auto &[key, v] : p.qubo.coeffs) q.push_back({key.first, key.second, v});
    json j = {{"problem", to_string(p.bp.kind)},
              {"num_vars", p.bp.num_vars},
              {"var_labels", p.bp.var_labels},
              {"penalty_weight", p.qubo.penalty_weight},
              {"norm_factor", p.qubo.norm_factor},
              {"qubo", {{"coeffs", q}, {"offset", p.qubo.offset}}},
              {"ising", p.cost.to_json()}};
    emit(g, j.dump(2) + "\n");
}

void cmd_solve_exact(const Globals &g, const std::string &instance) {
    Problem p = build_problem(instance);
    auto res = brute_force(p.qubo, [&](Basis x) { return is_feasible(p.bp, x); });
    auto report = decode_and_check(p.bp, res.best_bitstring);
    const std::string bits = to_bitstring(res.best_bitstring, p.bp.num_vars);
    const double objective = p.bp.objective(res.best_bitstring);
    if (g.format == "csv") {
        std::string s = csv_row({"bitstring", "qubo_cost", "objective", "feasible", "feasible_count"});
        s += csv_row({bits, num(res.best_cost), num(objective), report.feasible ? "1" : "0",
                      std::to_string(res.feasible_count)});
        emit(g, s);
        return;
    }
    json j = {{"num_vars", p.bp.num_vars},
              {"bitstring", bits},
              {"qubo_cost", res.best_cost},
              {"objective", objective},
              {"feasible", report.feasible},
              {"feasible_count", res.feasible_count},
              {"min_feasible_cost", res.min_feasible_cost}};
    if (!report.tour.empty()) j["tour"] = report.tour;
    if (!report.routes.empty()) j["routes"] = report.routes;
    emit(g, j.dump(2) + "\n");
}

void cmd_anneal(const Globals &g, const SweepConfig &cfg) {
    Problem p = build_problem(cfg.instance);
    Schedule sched = linear_schedule(cfg.n_steps, cfg.total_time, cfg.rule);
    ParamCircuit c = build_anneal(p.cost, sched);
    Statevector sv = simulate_from_plus(c);
    MetricsRow row = evaluate_samples(sample(sv, cfg.shots, derive_seed(cfg.seed, "anneal")), p.bp, p.qubo);
    row.variant = "anneal";
    row.d2q = two_qubit_depth(c, cfg.topology).two_qubit_depth;
    if (g.format == "csv") {
        emit(g, metrics_csv_header() + "\n" + to_csv_line(row) + "\n");
        return;
    }
    json j = row.to_json();
    j["expected_cost"] = expectation(sv, p.cost);
    emit(g, j.dump(2) + "\n");
}

void cmd_compress(const Globals &g, const SweepConfig &cfg, int m) {
    Problem p = build_problem(cfg.instance);
    Schedule sched = linear_schedule(cfg.n_steps, cfg.total_time, cfg.rule);
    CompressionSpec spec;
    spec.m = m;
    spec.eta = cfg.eta;
    spec.max_iters = cfg.compress_max_iters;
    spec.backend = cfg.compress_backend;
    spec.seed = derive_seed(cfg.seed, "compress/" + std::to_string(m));
    auto r = compress(p.cost, sched, spec);
    const auto depth = two_qubit_depth(r.circuit, cfg.topology).two_qubit_depth;
    if (g.format == "csv") {
        std::string s = csv_row({"m", "ansatz_layers", "target_layers", "prefix_d2q", "initial_fidelity",
                                 "achieved_fidelity", "iterations", "reached_eta"});
        s += csv_row({std::to_string(r.m), std::to_string(r.ansatz_layers), std::to_string(r.target_layers),
                      std::to_string(depth), num(r.initial_fidelity), num(r.achieved_fidelity),
                      std::to_string(r.iterations_used), r.reached_eta ? "1" : "0"});
        emit(g, s);
        return;
    }
    json j = r.to_json();
    j["prefix_d2q"] = depth;
    j["prefix_d2q_all_to_all"] = two_qubit_depth(r.circuit, Topology::kAllToAll).two_qubit_depth;
    j["prefix_d2q_linear"] = two_qubit_depth(r.circuit, Topology::kLinear).two_qubit_depth;
    emit(g, j.dump(2) + "\n");
}

void cmd_diagnose(const Globals &g, const SweepConfig &cfg) {
    Problem p = build_problem(cfg.instance);
    Schedule sched = linear_schedule(cfg.n_steps, cfg.total_time, cfg.rule);
    ProbeSettings probe{cfg.probe_strength, cfg.probe_time > 0.0 ? cfg.probe_time : sched.dt};
    std::vector<DiagnosticsRow> rows;
    for (int m : cfg.m_set) {
        Statevector sv = trotter_prefix_state(p.cost, sched, m);
        DiagnosticsRow d;
        d.m = m;
        d.energy_variance = energy_variance(sv, p.cost);
        d.energy_variance_sampled =
            energy_variance(sample(sv, cfg.shots, derive_seed(cfg.seed, "diagnose/" + std::to_string(m))), p.cost);
        d.susceptibility = susceptibility(p.cost, sched, m, probe);
        d.driver_energy = driver_energy(sv);
        d.probe_strength = probe.strength;
        d.probe_time = probe.time;
        rows.push_back(d);
    }
    if (g.format == "csv") {
        std::string s = diagnostics_csv_header() + "\n";
        for (const auto &d : rows) s += to_csv_line(d) + "\n";
        emit(g, s);
        return;
    }
    json j = json::array();
    for (const auto &d : rows) j.push_back(d.to_json());
    emit(g, j.dump(2) + "\n");
}

void cmd_sweep(const Globals &g, const SweepConfig &cfg) {
    SweepOutput out = run_sweep(cfg);
    if (!g.out.empty() && g.format == "csv") {
        write_sweep(out, g.out);
        return;
    }
    emit(g, g.format == "csv" ? out.csv() : out.to_json().dump(2) + "\n");
}

int fail(int code, const std::string &kind, const std::string &msg) {
    std::cerr << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Transportation QUBO encoders, digitized annealing, prefix compression and QAOA sweeps"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    auto *seed_opt = app.add_option("--seed", seed, "Base seed for every random stream");
    app.add_option("--config", g.config, "Sweep config JSON")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "Output path (default stdout)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    std::string instance;
    auto add_instance = [&](CLI::App *sub) {
        sub->add_option("--instance", instance, "Instance JSON path or benchmark:tsp|vrp|flp");
    };

    auto *gen = app.add_subcommand("generate", "Write a random instance as JSON");
    std::string gen_kind = "vrp";
    int gen_size = 5;
    int gen_second = 2;
    gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"tsp", "vrp", "flp"}));
    gen->add_option("--size", gen_size, "Cities, nodes or customers");
    gen->add_option("--second", gen_second, "Fleet size (vrp) or facilities (flp)");

    auto *enc = app.add_subcommand("encode", "QUBO and Ising dump with the variable count");
    add_instance(enc);
    auto *exact = app.add_subcommand("solve-exact", "Brute-force oracle");
    add_instance(exact);
    auto *ann = app.add_subcommand("anneal", "Baseline digitized annealing run and metrics");
    add_instance(ann);
    int steps = -1;
    ann->add_option("--steps", steps, "Trotter steps");
    auto *cmp = app.add_subcommand("compress", "Compress the first m Trotter steps");
    add_instance(cmp);
    int m = 1;
    double eta = -1.0;
    cmp->add_option("--m", m, "Prefix length")->check(CLI::NonNegativeNumber);
    cmp->add_option("--eta", eta, "Target fidelity");
    cmp->add_option("--steps", steps, "Trotter steps");
    auto *diag = app.add_subcommand("diagnose", "Variance, susceptibility and driver energy over m");
    add_instance(diag);
    diag->add_option("--steps", steps, "Trotter steps");
    auto *sw = app.add_subcommand("sweep", "Full (m, p, variant) sweep");
    add_instance(sw);
    std::vector<std::string> variants;
    std::vector<int> m_set;
    std::vector<int> p_set;
    std::string topology;
    sw->add_option("--variants", variants, "Subset of anneal, aqc-trot, aqc-qaoa, aqc-lcqaoa")->delimiter(',');
    sw->add_option("--m", m_set, "Prefix lengths")->delimiter(',');
    sw->add_option("--p", p_set, "QAOA depths")->delimiter(',');
    sw->add_option("--topology", topology)->check(CLI::IsMember({"all-to-all", "linear"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail(1, "usage", e.what());
    }
    if (*seed_opt) g.seed = seed;

    try {
        if (gen->parsed()) {
            cmd_generate(g, gen_kind, gen_size, gen_second);
            return 0;
        }
        SweepConfig cfg = load_config(g);
        if (!instance.empty()) cfg.instance = instance;
        if (steps > 0) cfg.n_steps = steps;
        try {
            if (eta > 0.0) cfg.eta = eta;
            if (!variants.empty()) cfg.variants = variants;
            if (!m_set.empty()) cfg.m_set = m_set;
            if (!p_set.empty()) cfg.p_set = p_set;
            if (!topology.empty()) cfg.topology = topology_from_string(topology);
            if (diag->parsed() && m_set.empty()) {
                cfg.m_set.clear();
                for (int k = 0; k <= cfg.n_steps; k++) cfg.m_set.push_back(k);
            }
            cfg.validate();
            if (cmp->parsed() && (m < 1 || m > cfg.n_steps)) throw std::invalid_argument("--m must lie in [1, steps]");
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
        if (enc->parsed()) cmd_encode(g, cfg.instance);
        if (exact->parsed()) cmd_solve_exact(g, cfg.instance);
        if (ann->parsed()) cmd_anneal(g, cfg);
        if (cmp->parsed()) cmd_compress(g, cfg, m);
        if (diag->parsed()) cmd_diagnose(g, cfg);
        if (sw->parsed()) cmd_sweep(g, cfg);
    } catch (const UsageError &e) {
        return fail(1, "usage", e.what());
    } catch (const std::exception &e) {
        return fail(2, "runtime", e.what());
    }
    return 0;
}
