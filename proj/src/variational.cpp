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

#include "qtransit/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "qtransit/dfo.hpp"
#include "qtransit/simulator.hpp"
#include "qtransit/statevector.hpp"

namespace qtransit {

std::string to_string(AlphaMode m) { return m == AlphaMode::kAdaptive ? "adaptive" : "fixed"; }

AlphaMode alpha_mode_from_string(const std::string &s) {
    if (s == "adaptive") return AlphaMode::kAdaptive;
    if (s == "fixed") return AlphaMode::kFixed;
    throw std::invalid_argument("unknown alpha mode '" + s + "'");
}

double default_layer_fidelity(int n) { return std::pow(0.994, std::max(1, n - 1)); }

void CvarConfig::validate() const {
    if (alpha_mode == AlphaMode::kFixed && !(fixed_alpha > 0.0 && fixed_alpha <= 1.0)) {
        throw std::invalid_argument("cvar config: alpha must lie in (0, 1]");
    }
    if (layer_fidelity > 1.0) throw std::invalid_argument("cvar config: layer fidelity must lie in (0, 1]");
    if (shots_per_eval < 1) throw std::invalid_argument("cvar config: shots_per_eval must be >= 1");
}

double cvar(const SampleSet &samples, std::span<const double> energies, double alpha) {
    if (samples.empty()) throw std::invalid_argument("cvar: empty sample set");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("cvar: alpha must lie in (0, 1]");
    std::vector<std::pair<double, std::uint64_t>> costs;
    costs.reserve(samples.counts.size());
    for (const auto &[b, c] : samples.counts) {
        if (b >= energies.size()) throw std::invalid_argument("cvar: sample outside the energy table");
        costs.emplace_back(energies[b], c);
    }
    std::sort(costs.begin(), costs.end());
    const auto keep = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::ceil(alpha * static_cast<double>(samples.shots) - 1e-9)));
    std::uint64_t taken = 0;
    double sum = 0.0;
    for (const auto &[e, c] : costs) {
        auto k = std::min(c, keep - taken);
        sum += e * static_cast<double>(k);
        taken += k;
        if (taken == keep) break;
    }
    return sum / static_cast<double>(keep);
}

double cvar(const SampleSet &samples, const IsingHamiltonian &cost, double alpha) {
    if (samples.empty()) throw std::invalid_argument("cvar: empty sample set");
    if (samples.n != cost.n) throw std::invalid_argument("cvar: qubit count mismatch");
    // Small tables only hold the sampled states.
    std::vector<double> e;
    if (cost.n <= 22) {
        e = cost.energies();
        return cvar(samples, e, alpha);
    }
    SampleSet remapped;
    remapped.n = samples.n;
    for (const auto &[b, c] : samples.counts) {
        remapped.add(e.size(), c);
        e.push_back(cost.cost(b));
    }
    return cvar(remapped, e, alpha);
}

double adaptive_alpha(double layer_fidelity, int n, int d2q) {
    if (n < 2) throw std::invalid_argument("adaptive_alpha: n must be >= 2");
    if (!(layer_fidelity > 0.0 && layer_fidelity <= 1.0)) {
        throw std::invalid_argument("adaptive_alpha: layer fidelity must lie in (0, 1]");
    }
    const double fid_cx = std::pow(layer_fidelity, 1.0 / (n - 1));
    const double gamma = std::max(1, d2q) / (fid_cx * fid_cx);
    return std::min(1.0, 1.0 / std::sqrt(gamma));
}

std::string to_string(InitKind k) {
    switch (k) {
        case InitKind::kZeros: return "zeros";
        case InitKind::kRamp: return "ramp";
        case InitKind::kSeededUniform: return "seeded-uniform";
    }
    return "?";
}

InitKind init_kind_from_string(const std::string &s) {
    if (s == "zeros") return InitKind::kZeros;
    if (s == "ramp") return InitKind::kRamp;
    if (s == "seeded-uniform") return InitKind::kSeededUniform;
    throw std::invalid_argument("unknown init kind '" + s + "'");
}

std::vector<double> init_params(InitKind kind, int p, double delta, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("init_params: p must be >= 1");
    std::vector<double> x(static_cast<size_t>(2 * p), 0.0);
    if (kind == InitKind::kRamp) {
        for (int l = 1; l <= p; l++) {
            double f = static_cast<double>(l) / p;
            x[static_cast<size_t>(2 * (l - 1))] = f * delta;
            x[static_cast<size_t>(2 * (l - 1) + 1)] = (1.0 - f) * delta;
        }
    } else if (kind == InitKind::kSeededUniform) {
        Rng rng(derive_seed(seed, "init-params"));
        for (auto &v : x) v = rng.uniform(-std::numbers::pi / 4, std::numbers::pi / 4);
    }
    return x;
}

std::string OptRun::trace_csv() const {
    std::string out = "iteration,cvar";
    size_t width = trace.empty() ? 0 : trace.front().params.size();
    for (size_t i = 0; i < width; i++) out += ",theta_" + std::to_string(i);
    out += '\n';
    char buf[64];
    for (const auto &t : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g", t.iteration, t.cvar);
        out += buf;
        for (double v : t.params) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

OptRun optimize(const ParamCircuit &circuit, const IsingHamiltonian &cost, const CvarConfig &cfg,
                std::span<const double> x0, const OptimizeOptions &opts) {
    cfg.validate();
    if (circuit.num_params() < 1) throw std::invalid_argument("optimize: circuit has no free parameters");
    if (static_cast<int>(x0.size()) != circuit.num_params()) {
        throw std::invalid_argument("optimize: x0 has the wrong length");
    }
    if (cost.n != circuit.num_qubits()) throw std::invalid_argument("optimize: qubit count mismatch");
    const int n = circuit.num_qubits();

    OptRun run;
    run.d2q = two_qubit_depth(circuit, cfg.topology).two_qubit_depth;
    if (cfg.alpha_mode == AlphaMode::kFixed) {
        run.alpha = cfg.fixed_alpha;
    } else {
        double lf = cfg.layer_fidelity > 0.0 ? cfg.layer_fidelity : default_layer_fidelity(n);
        run.alpha = n >= 2 ? adaptive_alpha(lf, n, run.d2q) : 1.0;
    }

    // Split off the bound leading layers.
    ParamCircuit head(n);
    ParamCircuit tail(n);
    for (const auto &name : circuit.param_names()) tail.add_param(name);
    bool in_tail = false;
    for (const auto &layer : circuit.layers()) {
        if (!in_tail) {
            in_tail = std::any_of(layer.gates.begin(), layer.gates.end(),
                                  [](const Gate &g) { return g.angle.is_free(); });
        }
        if (in_tail) {
            tail.add_layer(layer);
        } else {
            head.add_layer(layer);
        }
    }
    Statevector start = plus_state(n);
    CircuitSimulator(head).run(start);
    CircuitSimulator sim(tail);

    const auto energies = cost.energies();
    const auto uniforms = sorted_uniforms(cfg.shots_per_eval, derive_seed(cfg.seed, "cvar-eval"));

    auto objective = [&](std::span<const double> x) {
        Statevector sv = start;
        sim.run(sv, x);
        return cvar(sample_with_uniforms(sv, uniforms), energies, run.alpha);
    };

    DfoOptions dfo;
    dfo.rho_begin = opts.rho_begin;
    dfo.rho_end = opts.rho_end;
    dfo.max_evals = opts.budget;
    dfo.lower.assign(x0.size(), opts.lower);
    dfo.upper.assign(x0.size(), opts.upper);
    std::vector<double> start_x(x0.begin(), x0.end());
    for (size_t i = 0; i < start_x.size(); i++) start_x[i] = std::clamp(start_x[i], opts.lower, opts.upper);
    auto res = minimize_trust_region(objective, start_x, dfo);

    run.best_params = res.x_best;
    run.best_cvar = res.f_best;
    run.initial_cvar = res.trace.empty() ? res.f_best : res.trace.front().f;
    run.iterations = res.evals;
    run.used_simplex_fallback = res.used_simplex_fallback;
    run.trace.reserve(res.trace.size());
    for (size_t i = 0; i < res.trace.size(); i++) {
        run.trace.push_back({static_cast<int>(i) + 1, res.trace[i].f, res.trace[i].x});
    }
    return run;
}

}  // namespace qtransit
