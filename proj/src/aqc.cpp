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

#include "qtransit/aqc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "qtransit/dfo.hpp"
#include "qtransit/simulator.hpp"

namespace qtransit {

std::string to_string(CompressionBackend b) {
    return b == CompressionBackend::kAdjointLbfgs ? "adjoint-lbfgs" : "derivative-free";
}

CompressionBackend compression_backend_from_string(const std::string &s) {
    if (s == "adjoint-lbfgs") return CompressionBackend::kAdjointLbfgs;
    if (s == "derivative-free") return CompressionBackend::kDerivativeFree;
    throw std::invalid_argument("unknown compression backend '" + s + "'");
}

void CompressionSpec::validate() const {
    if (m < 1) throw std::invalid_argument("compression: m must be >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("compression: eta must lie in (0, 1)");
    if (max_iters < 0) throw std::invalid_argument("compression: max_iters must be nonnegative");
}

Statevector build_target_prefix(const IsingHamiltonian &cost, const Schedule &schedule, int m) {
    if (m < 0 || m > schedule.n_steps) throw std::invalid_argument("target prefix: m outside the schedule");
    Statevector sv = plus_state(cost.n);
    if (m == 0) return sv;
    Schedule fine = resample_prefix(schedule, m, 2 * m);
    CircuitSimulator(build_anneal(cost, fine)).run(sv);
    return sv;
}

Ansatz build_ansatz(const IsingHamiltonian &cost, const Schedule &schedule, int m) {
    if (m < 1 || m > schedule.n_steps) throw std::invalid_argument("ansatz: m outside the schedule");
    const int layers = ansatz_layer_count(m);
    Schedule coarse = resample_prefix(schedule, m, layers);
    Ansatz a{ParamCircuit(cost.n), {}};
    auto free_gate = [&](GateKind kind, int q0, int q1, double init, const std::string &name) {
        int p = a.circuit.add_param(name);
        a.initial.push_back(init);
        return Gate{kind, q0, q1, Angle::free(p)};
    };
    for (int l = 0; l < layers; l++) {
        const double s = coarse.points[static_cast<size_t>(l)];
        const double w = 2.0 * coarse.dt * s;
        const std::string tag = "prefix";
        const std::string suffix = "_" + std::to_string(l + 1);
        GateLayer cost_layer{tag, {}};
        for (const auto &[key, v] : cost.J) {
            if (v == 0.0) continue;
            cost_layer.gates.push_back(free_gate(GateKind::kRzz, key.first, key.second, w * v,
                                                 "zz_" + std::to_string(key.first) + "_" +
                                                     std::to_string(key.second) + suffix));
        }
        for (int q = 0; q < cost.n; q++) {
            double hq = cost.h[static_cast<size_t>(q)];
            if (hq == 0.0) continue;
            cost_layer.gates.push_back(free_gate(GateKind::kRz, q, -1, w * hq, "z_" + std::to_string(q) + suffix));
        }
        GateLayer driver{tag, {}};
        for (int q = 0; q < cost.n; q++) {
            driver.gates.push_back(
                free_gate(GateKind::kRx, q, -1, 2.0 * coarse.dt * (1.0 - s), "x_" + std::to_string(q) + suffix));
        }
        a.circuit.add_layer(std::move(cost_layer));
        a.circuit.add_layer(std::move(driver));
    }
    return a;
}

namespace {

void walsh_hadamard(std::vector<cplx> &w) {
    for (size_t h = 1; h < w.size(); h <<= 1) {
        for (size_t base = 0; base < w.size(); base += 2 * h) {
            for (size_t k = base; k < base + h; k++) {
                cplx a = w[k];
                cplx b = w[k + h];
                w[k] = a + b;
                w[k + h] = a - b;
            }
        }
    }
}

}  // namespace

FidelityGradient fidelity_gradient(const ParamCircuit &circuit, std::span<const double> params,
                                   const Statevector &initial, const Statevector &target) {
    const int n = circuit.num_qubits();
    if (initial.num_qubits() != n || target.num_qubits() != n) {
        throw std::invalid_argument("fidelity_gradient: qubit count mismatch");
    }
    Statevector phi = initial;
    CircuitSimulator(circuit).run(phi, params);
    Statevector lam = target;

    cplx ov{0.0, 0.0};
    {
        auto t = target.amplitudes();
        auto f = phi.amplitudes();
        for (size_t z = 0; z < t.size(); z++) ov += std::conj(t[z]) * f[z];
    }
    FidelityGradient out;
    out.fidelity = std::norm(ov);
    out.gradient.assign(params.size(), 0.0);
    const cplx cov = std::conj(ov);

    // Flatten, then walk backwards. Runs of diagonal gates commute, so their
    // derivatives are all read off one Walsh transform of conj(lam) * phi.
    std::vector<Gate> gates;
    for (const auto &layer : circuit.layers()) {
        for (const auto &g : layer.gates) gates.push_back(g);
    }
    auto add_grad = [&](const Gate &g, cplx expval) {
        if (!g.angle.is_free()) return;
        // d<t|U|0>/dtheta = (-i/2) <lam|P|phi>;  dF/dtheta = Im(conj(ov) <lam|P|phi>).
        out.gradient[static_cast<size_t>(g.angle.param)] += g.angle.scale * (cov * expval).imag();
    };

    size_t end = gates.size();
    while (end > 0) {
        const Gate &last = gates[end - 1];
        if (last.is_diagonal()) {
            size_t begin = end - 1;
            while (begin > 0 && gates[begin - 1].is_diagonal()) begin--;
            auto pa = phi.amplitudes();
            auto la = lam.amplitudes();
            const size_t count = end - begin;
            if (count > static_cast<size_t>(n)) {
                std::vector<cplx> w(pa.size());
                for (size_t z = 0; z < w.size(); z++) w[z] = std::conj(la[z]) * pa[z];
                walsh_hadamard(w);
                for (size_t k = begin; k < end; k++) {
                    const Gate &g = gates[k];
                    size_t mask = size_t{1} << g.q0;
                    if (g.kind == GateKind::kRzz) mask |= size_t{1} << g.q1;
                    add_grad(g, w[mask]);
                }
            } else {
                for (size_t k = begin; k < end; k++) {
                    const Gate &g = gates[k];
                    cplx s{0.0, 0.0};
                    for (size_t z = 0; z < pa.size(); z++) {
                        int sign = g.kind == GateKind::kRzz ? spin(z, g.q0) * spin(z, g.q1) : spin(z, g.q0);
                        s += static_cast<double>(sign) * std::conj(la[z]) * pa[z];
                    }
                    add_grad(g, s);
                }
            }
            IsingHamiltonian block(n);
            for (size_t k = begin; k < end; k++) {
                const Gate &g = gates[k];
                double half = g.angle.value(params) / 2.0;
                if (g.kind == GateKind::kRz) {
                    block.h[static_cast<size_t>(g.q0)] += half;
                } else {
                    block.J[{g.q0, g.q1}] += half;
                }
            }
            auto e = block.energies();
            phi.apply_phases(e, -1.0);
            lam.apply_phases(e, -1.0);
            end = begin;
            continue;
        }
        if (last.kind == GateKind::kRx) {
            auto pa = phi.amplitudes();
            auto la = lam.amplitudes();
            const size_t stride = size_t{1} << last.q0;
            cplx s{0.0, 0.0};
            for (size_t base = 0; base < pa.size(); base += 2 * stride) {
                for (size_t k = base; k < base + stride; k++) {
                    s += std::conj(la[k]) * pa[k + stride] + std::conj(la[k + stride]) * pa[k];
                }
            }
            add_grad(last, s);
            double theta = last.angle.value(params);
            phi.apply_rx(last.q0, -theta);
            lam.apply_rx(last.q0, -theta);
        } else {
            phi.apply_h(last.q0);
            lam.apply_h(last.q0);
        }
        end--;
    }
    return out;
}

namespace {

struct Progress {
    std::vector<double> best_x;
    double best_f = -1.0;
    std::vector<double> trace;

    void offer(const std::vector<double> &x, double f) {
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }
};

void run_lbfgs(const Ansatz &a, const Statevector &init, const Statevector &target, const CompressionSpec &spec,
               Progress &prog, int &iterations) {
    constexpr size_t kMemory = 10;
    constexpr int kMaxRestarts = 10;
    Rng rng(derive_seed(spec.seed, "aqc-restart"));
    std::vector<double> x = a.initial;
    auto eval = [&](const std::vector<double> &p) {
        auto fg = fidelity_gradient(a.circuit, p, init, target);
        prog.offer(p, fg.fidelity);
        // Minimize 1 - F.
        for (auto &v : fg.gradient) v = -v;
        return fg;
    };
    auto cur = eval(x);
    prog.trace.push_back(prog.best_f);
    std::deque<std::pair<std::vector<double>, std::vector<double>>> hist;
    int restarts = 0;
    const size_t dim = x.size();
    auto dot = [](const std::vector<double> &u, const std::vector<double> &v) {
        double s = 0.0;
        for (size_t i = 0; i < u.size(); i++) s += u[i] * v[i];
        return s;
    };

    while (iterations < spec.max_iters && prog.best_f < spec.eta) {
        iterations++;
        const auto &g = cur.gradient;
        double gnorm = std::sqrt(dot(g, g));
        bool stalled = gnorm < 1e-12;
        if (!stalled) {
            // Two-loop recursion.
            std::vector<double> q = g;
            std::vector<double> alpha(hist.size());
            for (size_t k = hist.size(); k-- > 0;) {
                const auto &[s, y] = hist[k];
                alpha[k] = dot(s, q) / dot(y, s);
                for (size_t i = 0; i < dim; i++) q[i] -= alpha[k] * y[i];
            }
            double gamma = hist.empty() ? 0.05 / gnorm : dot(hist.back().first, hist.back().second) /
                                                             dot(hist.back().second, hist.back().second);
            for (auto &v : q) v *= gamma;
            for (size_t k = 0; k < hist.size(); k++) {
                const auto &[s, y] = hist[k];
                double beta = dot(y, q) / dot(y, s);
                for (size_t i = 0; i < dim; i++) q[i] += s[i] * (alpha[k] - beta);
            }
            std::vector<double> d(dim);
            for (size_t i = 0; i < dim; i++) d[i] = -q[i];
            double slope = dot(g, d);
            if (slope >= 0.0) {
                hist.clear();
                for (size_t i = 0; i < dim; i++) d[i] = -0.05 * g[i] / gnorm;
                slope = dot(g, d);
            }
            const double f0 = 1.0 - cur.fidelity;
            double t = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 30; ls++) {
                std::vector<double> xn(dim);
                for (size_t i = 0; i < dim; i++) xn[i] = x[i] + t * d[i];
                auto next = eval(xn);
                if (1.0 - next.fidelity <= f0 + 1e-4 * t * slope) {
                    std::vector<double> s(dim), y(dim);
                    for (size_t i = 0; i < dim; i++) {
                        s[i] = xn[i] - x[i];
                        y[i] = next.gradient[i] - g[i];
                    }
                    if (dot(s, y) > 1e-16) {
                        hist.emplace_back(std::move(s), std::move(y));
                        if (hist.size() > kMemory) hist.pop_front();
                    }
                    x = std::move(xn);
                    cur = std::move(next);
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            stalled = !accepted;
        }
        if (stalled) {
            if (restarts++ >= kMaxRestarts) {
                prog.trace.push_back(prog.best_f);
                break;
            }
            x = prog.best_x;
            for (auto &v : x) v += 0.01 * rng.normal();
            hist.clear();
            cur = eval(x);
        }
        prog.trace.push_back(prog.best_f);
    }
}

void run_derivative_free(const Ansatz &a, const Statevector &init, const Statevector &target,
                         const CompressionSpec &spec, Progress &prog, int &iterations) {
    CircuitSimulator sim(a.circuit);
    auto objective = [&](std::span<const double> p) {
        Statevector sv = init;
        sim.run(sv, p);
        double f = fidelity(sv, target);
        prog.offer(std::vector<double>(p.begin(), p.end()), f);
        return 1.0 - f;
    };
    prog.offer(a.initial, fidelity([&] {
                   Statevector sv = init;
                   sim.run(sv, a.initial);
                   return sv;
               }(),
                                   target));
    prog.trace.push_back(prog.best_f);
    if (prog.best_f >= spec.eta || spec.max_iters == 0) return;
    DfoOptions opts;
    opts.rho_begin = 0.05;
    opts.rho_end = 1e-7;
    opts.max_evals = spec.max_iters;
    opts.f_target = 1.0 - spec.eta;
    auto res = minimize_trust_region(objective, a.initial, opts);
    iterations = res.evals;
    double best = prog.trace.front();
    for (const auto &e : res.trace) {
        best = std::max(best, 1.0 - e.f);
        prog.trace.push_back(best);
    }
}

}  // namespace

CompressionResult compress(const IsingHamiltonian &cost, const Schedule &schedule, const CompressionSpec &spec) {
    spec.validate();
    if (spec.m > schedule.n_steps) throw std::invalid_argument("compression: m exceeds the schedule length");
    Statevector target = build_target_prefix(cost, schedule, spec.m);
    Statevector init = plus_state(cost.n);
    Ansatz a = build_ansatz(cost, schedule, spec.m);

    Progress prog;
    int iterations = 0;
    if (spec.backend == CompressionBackend::kAdjointLbfgs) {
        run_lbfgs(a, init, target, spec, prog, iterations);
    } else {
        run_derivative_free(a, init, target, spec, prog, iterations);
    }

    CompressionResult r;
    r.m = spec.m;
    r.eta = spec.eta;
    r.angles = prog.best_x;
    r.circuit = a.circuit.bind(r.angles);
    r.initial_fidelity = prog.trace.front();
    r.achieved_fidelity = std::clamp(prog.best_f, 0.0, 1.0);
    r.iterations_used = iterations;
    r.target_layers = 2 * spec.m;
    r.ansatz_layers = ansatz_layer_count(spec.m);
    r.reached_eta = r.achieved_fidelity >= spec.eta;
    r.backend = to_string(spec.backend);
    r.fidelity_trace = std::move(prog.trace);
    return r;
}

nlohmann::json CompressionResult::to_json() const {
    return {{"m", m},
            {"eta", eta},
            {"initial_fidelity", initial_fidelity},
            {"achieved_fidelity", achieved_fidelity},
            {"iterations", iterations_used},
            {"target_layers", target_layers},
            {"ansatz_layers", ansatz_layers},
            {"reached_eta", reached_eta},
            {"backend", backend},
            {"angles", angles}};
}

CompressionResult CompressionResult::from_json(const nlohmann::json &j, const IsingHamiltonian &cost,
                                               const Schedule &schedule) {
    CompressionResult r;
    r.m = j.at("m").get<int>();
    r.eta = j.value("eta", 0.99);
    r.initial_fidelity = j.value("initial_fidelity", 0.0);
    r.achieved_fidelity = j.at("achieved_fidelity").get<double>();
    r.iterations_used = j.value("iterations", 0);
    r.target_layers = j.value("target_layers", 2 * r.m);
    r.ansatz_layers = j.value("ansatz_layers", ansatz_layer_count(r.m));
    r.reached_eta = j.value("reached_eta", r.achieved_fidelity >= r.eta);
    r.backend = j.value("backend", std::string("adjoint-lbfgs"));
    r.angles = j.at("angles").get<std::vector<double>>();
    Ansatz a = build_ansatz(cost, schedule, r.m);
    if (static_cast<int>(r.angles.size()) != a.circuit.num_params()) {
        throw std::invalid_argument("compression result: angle count does not match the ansatz");
    }
    r.circuit = a.circuit.bind(r.angles);
    return r;
}

ParamCircuit assemble_hybrid(const CompressionResult *prefix, const ParamCircuit &tail) {
    if (prefix == nullptr) return tail;
    if (prefix->circuit.num_qubits() != tail.num_qubits()) {
        throw std::invalid_argument("assemble_hybrid: prefix and tail act on different qubit counts");
    }
    ParamCircuit out = prefix->circuit;
    out.retag("prefix");
    out.append(tail);
    return out;
}

}  // namespace qtransit
