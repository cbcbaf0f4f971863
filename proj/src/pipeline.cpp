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

#include "qtransit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "qtransit/instances.hpp"
#include "qtransit/simulator.hpp"

namespace qtransit {

using nlohmann::json;

void SweepConfig::validate() const {
    if (n_steps < 1) throw std::invalid_argument("config: n_steps must be >= 1");
    if (!(total_time > 0.0)) throw std::invalid_argument("config: total_time must be positive");
    if (m_set.empty()) throw std::invalid_argument("config: m_set is empty");
    for (int m : m_set) {
        if (m < 0 || m > n_steps) throw std::invalid_argument("config: m_set must lie in [0, n_steps]");
    }
    if (variants.empty()) throw std::invalid_argument("config: no variants requested");
    bool variational = false;
    for (const auto &v : variants) {
        if (std::find(kVariants.begin(), kVariants.end(), v) == kVariants.end()) {
            throw std::invalid_argument("config: unknown variant '" + v + "'");
        }
        variational = variational || v == "aqc-qaoa" || v == "aqc-lcqaoa";
    }
    if (variational && p_set.empty()) throw std::invalid_argument("config: p_set is empty");
    for (int p : p_set) {
        if (p < 1) throw std::invalid_argument("config: p_set entries must be >= 1");
    }
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("config: eta must lie in (0, 1)");
    if (shots < 1) throw std::invalid_argument("config: shots must be >= 1");
    if (budget < 1) throw std::invalid_argument("config: budget must be >= 1");
    if (!(probe_strength > 0.0)) throw std::invalid_argument("config: probe_strength must be positive");
    if (alpha_mode == AlphaMode::kFixed && !(fixed_alpha > 0.0 && fixed_alpha <= 1.0)) {
        throw std::invalid_argument("config: fixed_alpha must lie in (0, 1]");
    }
    if (layer_fidelity > 1.0) throw std::invalid_argument("config: layer_fidelity must lie in (0, 1]");
}

json SweepConfig::to_json() const {
    return {{"instance", instance},
            {"n_steps", n_steps},
            {"total_time", total_time},
            {"rule", to_string(rule)},
            {"m_set", m_set},
            {"p_set", p_set},
            {"variants", variants},
            {"eta", eta},
            {"compress_max_iters", compress_max_iters},
            {"compress_backend", to_string(compress_backend)},
            {"shots", shots},
            {"alpha_mode", to_string(alpha_mode)},
            {"fixed_alpha", fixed_alpha},
            {"layer_fidelity", layer_fidelity},
            {"init", to_string(init)},
            {"init_delta", init_delta},
            {"budget", budget},
            {"rho_begin", rho_begin},
            {"rho_end", rho_end},
            {"seed", seed},
            {"topology", to_string(topology)},
            {"diagnostics", diagnostics},
            {"probe_strength", probe_strength},
            {"probe_time", probe_time},
            {"workers", workers}};
}

SweepConfig SweepConfig::from_json(const json &j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    SweepConfig c;
    const std::set<std::string> known = [&] {
        std::set<std::string> k;
        const json defaults = c.to_json();
        for (const auto &[key, v] : defaults.items()) k.insert(key);
        return k;
    }();
    for (const auto &[key, v] : j.items()) {
        if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    auto get = [&](const char *key, auto &field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("instance", c.instance);
    get("n_steps", c.n_steps);
    get("total_time", c.total_time);
    if (j.contains("rule")) c.rule = schedule_rule_from_string(j.at("rule").get<std::string>());
    get("m_set", c.m_set);
    get("p_set", c.p_set);
    get("variants", c.variants);
    get("eta", c.eta);
    get("compress_max_iters", c.compress_max_iters);
    if (j.contains("compress_backend")) {
        c.compress_backend = compression_backend_from_string(j.at("compress_backend").get<std::string>());
    }
    get("shots", c.shots);
    if (j.contains("alpha_mode")) c.alpha_mode = alpha_mode_from_string(j.at("alpha_mode").get<std::string>());
    get("fixed_alpha", c.fixed_alpha);
    get("layer_fidelity", c.layer_fidelity);
    if (j.contains("init")) c.init = init_kind_from_string(j.at("init").get<std::string>());
    get("init_delta", c.init_delta);
    get("budget", c.budget);
    get("rho_begin", c.rho_begin);
    get("rho_end", c.rho_end);
    get("seed", c.seed);
    if (j.contains("topology")) c.topology = topology_from_string(j.at("topology").get<std::string>());
    get("diagnostics", c.diagnostics);
    get("probe_strength", c.probe_strength);
    get("probe_time", c.probe_time);
    get("workers", c.workers);
    c.validate();
    return c;
}

Instance resolve_instance(const std::string &spec) {
    const std::string prefix = "benchmark:";
    if (spec.rfind(prefix, 0) == 0) return benchmark_instance(problem_kind_from_string(spec.substr(prefix.size())));
    return load_instance(spec);
}

int resolve_workers(int configured) {
    if (const char *env = std::getenv("QTRANSIT_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (configured > 0) return configured;
    return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

bool wants(const SweepConfig &cfg, const std::string &v) {
    return std::find(cfg.variants.begin(), cfg.variants.end(), v) != cfg.variants.end();
}

bool wants_trot_row(const SweepConfig &cfg, int m) {
    return m == 0 ? wants(cfg, "anneal") || wants(cfg, "aqc-trot") : wants(cfg, "aqc-trot");
}

int variant_index(const std::string &v) {
    return static_cast<int>(std::find(kVariants.begin(), kVariants.end(), v) - kVariants.begin());
}

void parallel_for(size_t count, int workers, const std::function<void(size_t)> &fn) {
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < count; i = next++) fn(i);
    };
    const int threads = static_cast<int>(std::min<size_t>(static_cast<size_t>(workers), count));
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; t++) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
}

struct Job {
    std::string variant;
    int m = 0;
    int p = 0;
};

}  // namespace

size_t expected_row_count(const SweepConfig &cfg) {
    size_t rows = 0;
    for (int m : cfg.m_set) {
        if (wants_trot_row(cfg, m)) rows++;
    }
    for (const char *v : {"aqc-qaoa", "aqc-lcqaoa"}) {
        if (wants(cfg, v)) rows += cfg.m_set.size() * cfg.p_set.size();
    }
    return rows;
}

SweepOutput run_sweep(const SweepConfig &cfg) {
    cfg.validate();
    const Instance inst = resolve_instance(cfg.instance);
    const BinaryProgram bp = encode(inst);
    const Qubo qubo = to_qubo(bp);
    const IsingHamiltonian cost = qubo_to_ising(qubo);
    const Schedule schedule = linear_schedule(cfg.n_steps, cfg.total_time, cfg.rule);
    const int workers = resolve_workers(cfg.workers);
    const int n = cost.n;

    SweepOutput out;
    out.config = cfg.to_json();
    out.num_qubits = n;

    std::vector<int> ms = cfg.m_set;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

    // One compression per m, shared by every tail.
    std::map<int, CompressionResult> compressed;
    {
        std::vector<int> todo;
        for (int m : ms) {
            if (m > 0) todo.push_back(m);
        }
        std::vector<CompressionResult> results(todo.size());
        parallel_for(todo.size(), workers, [&](size_t i) {
            CompressionSpec spec;
            spec.m = todo[i];
            spec.eta = cfg.eta;
            spec.max_iters = cfg.compress_max_iters;
            spec.seed = derive_seed(cfg.seed, "compress/" + std::to_string(todo[i]));
            spec.backend = cfg.compress_backend;
            results[i] = compress(cost, schedule, spec);
        });
        for (size_t i = 0; i < todo.size(); i++) compressed.emplace(todo[i], std::move(results[i]));
    }
    for (int m : ms) {
        CompressionSummary s;
        s.m = m;
        if (m > 0) {
            const auto &c = compressed.at(m);
            s.fidelity = c.achieved_fidelity;
            s.iterations = c.iterations_used;
            s.ansatz_layers = c.ansatz_layers;
            s.reached_eta = c.reached_eta;
            s.angles = c.angles;
        }
        out.compressions.push_back(std::move(s));
    }
    auto prefix_of = [&](int m) -> const CompressionResult * { return m > 0 ? &compressed.at(m) : nullptr; };

    if (cfg.diagnostics) {
        out.diagnostics.resize(ms.size());
        parallel_for(ms.size(), workers, [&](size_t i) {
            const int m = ms[i];
            Statevector sv = plus_state(n);
            if (m > 0) CircuitSimulator(compressed.at(m).circuit).run(sv);
            DiagnosticsRow d;
            d.m = m;
            d.energy_variance = energy_variance(sv, cost);
            d.energy_variance_sampled =
                energy_variance(sample(sv, cfg.shots, derive_seed(cfg.seed, "diagnose/" + std::to_string(m))), cost);
            d.probe_strength = cfg.probe_strength;
            d.probe_time = cfg.probe_time > 0.0 ? cfg.probe_time : schedule.dt;
            d.susceptibility = susceptibility(sv, cost, std::min(1.0, m * schedule.dt / schedule.total_time),
                                              schedule.dt, {cfg.probe_strength, d.probe_time});
            d.driver_energy = driver_energy(sv);
            out.diagnostics[i] = d;
        });
    }

    std::vector<Job> jobs;
    for (const auto &v : kVariants) {
        for (int m : ms) {
            if (v == "anneal" && m == 0 && wants_trot_row(cfg, 0)) jobs.push_back({v, 0, 0});
            if (v == "aqc-trot" && m > 0 && wants_trot_row(cfg, m)) jobs.push_back({v, m, 0});
            if ((v == "aqc-qaoa" || v == "aqc-lcqaoa") && wants(cfg, v)) {
                std::vector<int> ps = cfg.p_set;
                std::sort(ps.begin(), ps.end());
                for (int p : ps) jobs.push_back({v, m, p});
            }
        }
    }

    out.rows.resize(jobs.size());
    parallel_for(jobs.size(), workers, [&](size_t i) {
        const Job &job = jobs[i];
        const auto t0 = std::chrono::steady_clock::now();
        SweepRow row;
        row.metrics.m = job.m;
        row.metrics.p = job.p;
        row.metrics.variant = job.variant;
        row.seed = derive_seed(cfg.seed, job.variant + "/" + std::to_string(job.m) + "/" + std::to_string(job.p));
        const CompressionResult *prefix = prefix_of(job.m);
        row.metrics.prefix_fidelity = prefix ? prefix->achieved_fidelity : 1.0;
        try {
            if (prefix) row.prefix_d2q = two_qubit_depth(prefix->circuit, cfg.topology).two_qubit_depth;
            const bool trot = job.variant == "anneal" || job.variant == "aqc-trot";
            ParamCircuit tail = trot ? build_anneal(cost, schedule, job.m, schedule.n_steps)
                                     : (job.variant == "aqc-qaoa" ? build_qaoa_tail(cost, job.p)
                                                                  : build_lc_qaoa_tail(cost, job.p));
            ParamCircuit circuit = assemble_hybrid(prefix, tail);
            int iterations = prefix ? prefix->iterations_used : 0;
            if (!trot) {
                CvarConfig cv;
                cv.alpha_mode = cfg.alpha_mode;
                cv.fixed_alpha = cfg.fixed_alpha;
                cv.layer_fidelity = cfg.layer_fidelity;
                cv.shots_per_eval = cfg.shots;
                cv.seed = row.seed;
                cv.topology = cfg.topology;
                OptimizeOptions oo;
                oo.budget = cfg.budget;
                oo.rho_begin = cfg.rho_begin;
                oo.rho_end = cfg.rho_end;
                auto x0 = init_params(cfg.init, job.p, cfg.init_delta, row.seed);
                OptRun run = optimize(circuit, cost, cv, x0, oo);
                iterations = run.iterations;
                row.alpha = run.alpha;
                row.params = run.best_params;
            }
            Statevector sv = plus_state(n);
            CircuitSimulator(circuit).run(sv, row.params);
            SampleSet samples = sample(sv, cfg.shots, derive_seed(row.seed, "final-sample"));
            MetricsRow metrics = evaluate_samples(samples, bp, qubo);
            metrics.m = job.m;
            metrics.p = job.p;
            metrics.variant = job.variant;
            metrics.prefix_fidelity = row.metrics.prefix_fidelity;
            metrics.iterations = iterations;
            metrics.d2q = two_qubit_depth(circuit, cfg.topology).two_qubit_depth;
            row.d2q_all_to_all = two_qubit_depth(circuit, Topology::kAllToAll).two_qubit_depth;
            const DepthReport routed = two_qubit_depth(circuit, Topology::kLinear);
            row.d2q_linear = routed.two_qubit_depth;
            row.swap_count_linear = routed.swap_count;
            row.metrics = std::move(metrics);
        } catch (const std::exception &e) {
            row.metrics.error = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.rows[i] = std::move(row);
    });
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const SweepRow &a, const SweepRow &b) {
        const auto ka = std::tuple(variant_index(a.metrics.variant), a.metrics.m, a.metrics.p);
        const auto kb = std::tuple(variant_index(b.metrics.variant), b.metrics.m, b.metrics.p);
        return ka < kb;
    });
    return out;
}

std::string SweepOutput::csv() const {
    std::string s = metrics_csv_header() + "\n";
    for (const auto &r : rows) s += to_csv_line(r.metrics) + "\n";
    return s;
}

std::string SweepOutput::diagnostics_csv() const {
    std::string s = diagnostics_csv_header() + "\n";
    for (const auto &d : diagnostics) s += to_csv_line(d) + "\n";
    return s;
}

json SweepOutput::to_json() const {
    json j;
    j["config"] = config;
    j["num_qubits"] = num_qubits;
    j["rows"] = json::array();
    for (const auto &r : rows) {
        json row = r.metrics.to_json();
        row["seed"] = r.seed;
        row["seconds"] = r.seconds;
        row["prefix_d2q"] = r.prefix_d2q;
        row["d2q_all_to_all"] = r.d2q_all_to_all;
        row["d2q_linear"] = r.d2q_linear;
        row["swap_count_linear"] = r.swap_count_linear;
        row["alpha"] = r.alpha;
        row["params"] = r.params;
        j["rows"].push_back(std::move(row));
    }
    j["diagnostics"] = json::array();
    for (const auto &d : diagnostics) j["diagnostics"].push_back(d.to_json());
    j["compressions"] = json::array();
    for (const auto &c : compressions) {
        j["compressions"].push_back({{"m", c.m},
                                     {"fidelity", c.fidelity},
                                     {"iterations", c.iterations},
                                     {"ansatz_layers", c.ansatz_layers},
                                     {"reached_eta", c.reached_eta},
                                     {"angles", c.angles}});
    }
    return j;
}

namespace {

void write_text(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string stem_of(const std::string &path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
    return path;
}

}  // namespace

void write_sweep(const SweepOutput &out, const std::string &csv_path) {
    write_text(csv_path, out.csv());
    const std::string stem = stem_of(csv_path);
    write_text(stem + ".json", out.to_json().dump(2) + "\n");
    if (!out.diagnostics.empty()) write_text(stem + ".diagnostics.csv", out.diagnostics_csv());
}

}  // namespace qtransit
