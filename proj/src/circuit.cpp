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

#include "qtransit/circuit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qtransit {

std::string to_string(ScheduleRule rule) {
    switch (rule) {
        case ScheduleRule::kRightEndpoint:
            return "right";
        case ScheduleRule::kLeftEndpoint:
            return "left";
        case ScheduleRule::kMidpoint:
            return "midpoint";
    }
    return "?";
}

ScheduleRule schedule_rule_from_string(const std::string &s) {
    if (s == "right") return ScheduleRule::kRightEndpoint;
    if (s == "left") return ScheduleRule::kLeftEndpoint;
    if (s == "midpoint") return ScheduleRule::kMidpoint;
    throw std::invalid_argument("unknown schedule rule '" + s + "'");
}

namespace {

double rule_offset(ScheduleRule rule) {
    switch (rule) {
        case ScheduleRule::kRightEndpoint:
            return 1.0;
        case ScheduleRule::kLeftEndpoint:
            return 0.0;
        case ScheduleRule::kMidpoint:
            return 0.5;
    }
    return 1.0;
}

}  // namespace

Schedule linear_schedule(int n_steps, double total_time, ScheduleRule rule) {
    if (n_steps < 1) throw std::invalid_argument("linear_schedule: n_steps must be >= 1");
    if (!(total_time > 0.0)) throw std::invalid_argument("linear_schedule: total time must be positive");
    Schedule s;
    s.n_steps = n_steps;
    s.total_time = total_time;
    s.dt = total_time / n_steps;
    s.rule = rule;
    const double off = rule_offset(rule);
    for (int k = 0; k < n_steps; k++) s.points.push_back((k + off) / n_steps);
    return s;
}

Schedule resample_prefix(const Schedule &coarse, int m, int n_sub) {
    if (m < 0 || m > coarse.n_steps) throw std::invalid_argument("resample_prefix: m outside the schedule");
    if (n_sub < 1) throw std::invalid_argument("resample_prefix: need at least one sub-step");
    Schedule s;
    s.n_steps = n_sub;
    s.total_time = coarse.total_time;
    s.dt = m * coarse.dt / n_sub;
    s.rule = coarse.rule;
    const double off = rule_offset(coarse.rule);
    for (int j = 0; j < n_sub; j++) s.points.push_back(std::min(1.0, (j + off) * s.dt / coarse.total_time));
    return s;
}

double Angle::value(std::span<const double> params) const {
    if (param < 0) return scale;
    if (static_cast<size_t>(param) >= params.size()) {
        throw std::invalid_argument("angle references parameter " + std::to_string(param) + " but only " +
                                    std::to_string(params.size()) + " were supplied");
    }
    return scale * params[static_cast<size_t>(param)];
}

ParamCircuit::ParamCircuit(int num_qubits) : n_(num_qubits) {
    if (num_qubits < 1) throw std::invalid_argument("circuit: need at least one qubit");
}

int ParamCircuit::add_param(std::string name) {
    param_names_.push_back(std::move(name));
    return num_params() - 1;
}

void ParamCircuit::add_layer(GateLayer layer) {
    for (const auto &g : layer.gates) {
        bool ok = g.q0 >= 0 && g.q0 < n_;
        if (g.is_two_qubit()) ok = ok && g.q1 > g.q0 && g.q1 < n_;
        if (g.angle.param >= num_params()) ok = false;
        if (!ok) throw std::invalid_argument("circuit: gate references an invalid qubit or parameter");
    }
    layers_.push_back(std::move(layer));
}

void ParamCircuit::append(const ParamCircuit &other) {
    if (other.n_ != n_) throw std::invalid_argument("circuit: qubit count mismatch on append");
    const int shift = num_params();
    for (const auto &name : other.param_names_) param_names_.push_back(name);
    for (auto layer : other.layers_) {
        for (auto &g : layer.gates) {
            if (g.angle.is_free()) g.angle.param += shift;
        }
        layers_.push_back(std::move(layer));
    }
}

void ParamCircuit::retag(const std::string &segment) {
    for (auto &layer : layers_) layer.segment = segment;
}

ParamCircuit ParamCircuit::bind(std::span<const double> params) const {
    if (static_cast<int>(params.size()) != num_params()) {
        throw std::invalid_argument("circuit: expected " + std::to_string(num_params()) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    ParamCircuit out(n_);
    out.layers_ = layers_;
    for (auto &layer : out.layers_) {
        for (auto &g : layer.gates) g.angle = Angle::fixed(g.angle.value(params));
    }
    return out;
}

size_t ParamCircuit::gate_count() const {
    size_t c = 0;
    for (const auto &l : layers_) c += l.gates.size();
    return c;
}

int ParamCircuit::two_qubit_count() const {
    int c = 0;
    for (const auto &l : layers_) {
        for (const auto &g : l.gates) c += g.is_two_qubit() ? 1 : 0;
    }
    return c;
}

nlohmann::json ParamCircuit::to_json() const {
    static const char *names[] = {"rx", "rz", "rzz", "h"};
    auto out = nlohmann::json::array();
    for (const auto &layer : layers_) {
        auto gates = nlohmann::json::array();
        for (const auto &g : layer.gates) {
            nlohmann::json jg;
            jg["gate"] = names[static_cast<int>(g.kind)];
            jg["qubits"] = g.is_two_qubit() ? nlohmann::json{g.q0, g.q1} : nlohmann::json{g.q0};
            if (g.kind != GateKind::kH) {
                if (g.angle.is_free()) {
                    jg["param"] = param_names_[static_cast<size_t>(g.angle.param)];
                    jg["scale"] = g.angle.scale;
                } else {
                    jg["angle"] = g.angle.scale;
                }
            }
            gates.push_back(std::move(jg));
        }
        out.push_back({{"segment", layer.segment}, {"gates", std::move(gates)}});
    }
    return out;
}

void append_trotter_step(ParamCircuit &c, const IsingHamiltonian &cost, double dt, double s,
                         const std::string &segment) {
    if (cost.n != c.num_qubits()) throw std::invalid_argument("trotter step: qubit count mismatch");
    GateLayer cost_layer{segment, {}};
    const double w = 2.0 * dt * s;
    for (const auto &[key, v] : cost.J) {
        if (v * w != 0.0) cost_layer.gates.push_back({GateKind::kRzz, key.first, key.second, Angle::fixed(w * v)});
    }
    for (int q = 0; q < cost.n; q++) {
        double hq = cost.h[static_cast<size_t>(q)];
        if (hq * w != 0.0) cost_layer.gates.push_back({GateKind::kRz, q, -1, Angle::fixed(w * hq)});
    }
    GateLayer driver_layer{segment, {}};
    const double theta = 2.0 * dt * (1.0 - s);
    if (theta != 0.0) {
        for (int q = 0; q < cost.n; q++) driver_layer.gates.push_back({GateKind::kRx, q, -1, Angle::fixed(theta)});
    }
    c.add_layer(std::move(cost_layer));
    c.add_layer(std::move(driver_layer));
}

ParamCircuit build_anneal(const IsingHamiltonian &cost, const Schedule &schedule, int k_from, int k_to) {
    if (k_from < 0 || k_to > schedule.n_steps || k_from > k_to) {
        throw std::invalid_argument("build_anneal: step range outside the schedule");
    }
    ParamCircuit c(cost.n);
    for (int k = k_from; k < k_to; k++) {
        append_trotter_step(c, cost, schedule.dt, schedule.points[static_cast<size_t>(k)], "trotter");
    }
    return c;
}

ParamCircuit build_anneal(const IsingHamiltonian &cost, const Schedule &schedule) {
    return build_anneal(cost, schedule, 0, schedule.n_steps);
}

namespace {

ParamCircuit build_alternating(const IsingHamiltonian &cost, int p) {
    if (p < 1) throw std::invalid_argument("qaoa tail: p must be >= 1");
    ParamCircuit c(cost.n);
    for (int l = 1; l <= p; l++) {
        const std::string tag = "qaoa-layer-" + std::to_string(l);
        int gamma = c.add_param("gamma_" + std::to_string(l));
        int beta = c.add_param("beta_" + std::to_string(l));
        GateLayer cost_layer{tag, {}};
        for (const auto &[key, v] : cost.J) {
            if (v != 0.0) cost_layer.gates.push_back({GateKind::kRzz, key.first, key.second, Angle::free(gamma, 2.0 * v)});
        }
        for (int q = 0; q < cost.n; q++) {
            double hq = cost.h[static_cast<size_t>(q)];
            if (hq != 0.0) cost_layer.gates.push_back({GateKind::kRz, q, -1, Angle::free(gamma, 2.0 * hq)});
        }
        GateLayer mixer{tag, {}};
        for (int q = 0; q < cost.n; q++) mixer.gates.push_back({GateKind::kRx, q, -1, Angle::free(beta, 2.0)});
        c.add_layer(std::move(cost_layer));
        c.add_layer(std::move(mixer));
    }
    return c;
}

}  // namespace

ParamCircuit build_qaoa_tail(const IsingHamiltonian &cost, int p) { return build_alternating(cost, p); }

ParamCircuit build_lc_qaoa_tail(const IsingHamiltonian &cost, int p) {
    return build_alternating(cost.nearest_neighbor(), p);
}

std::string to_string(Topology t) { return t == Topology::kLinear ? "linear" : "all-to-all"; }

Topology topology_from_string(const std::string &s) {
    if (s == "all-to-all") return Topology::kAllToAll;
    if (s == "linear") return Topology::kLinear;
    throw std::invalid_argument("unknown topology '" + s + "'");
}

DepthReport two_qubit_depth(const ParamCircuit &c, Topology topology) {
    const int n = c.num_qubits();
    DepthReport rep;
    rep.topology = topology;
    std::vector<int> finish(static_cast<size_t>(n), 0);  // per physical qubit
    std::vector<int> phys(static_cast<size_t>(n));       // logical -> physical
    std::vector<int> logical(static_cast<size_t>(n));    // physical -> logical
    std::iota(phys.begin(), phys.end(), 0);
    std::iota(logical.begin(), logical.end(), 0);

    auto schedule = [&](int a, int b) {
        int t = 1 + std::max(finish[static_cast<size_t>(a)], finish[static_cast<size_t>(b)]);
        finish[static_cast<size_t>(a)] = t;
        finish[static_cast<size_t>(b)] = t;
        rep.two_qubit_count++;
    };

    for (const auto &layer : c.layers()) {
        for (const auto &g : layer.gates) {
            if (!g.is_two_qubit()) continue;
            int pa = phys[static_cast<size_t>(g.q0)];
            int pb = phys[static_cast<size_t>(g.q1)];
            if (topology == Topology::kLinear) {
                int lo = std::min(pa, pb);
                int hi = std::max(pa, pb);
                while (hi - lo > 1) {
                    schedule(lo, lo + 1);
                    rep.swap_count++;
                    int la = logical[static_cast<size_t>(lo)];
                    int lb = logical[static_cast<size_t>(lo + 1)];
                    std::swap(logical[static_cast<size_t>(lo)], logical[static_cast<size_t>(lo + 1)]);
                    phys[static_cast<size_t>(la)] = lo + 1;
                    phys[static_cast<size_t>(lb)] = lo;
                    lo++;
                }
                pa = lo;
                pb = hi;
            }
            schedule(pa, pb);
        }
    }
    rep.two_qubit_depth = finish.empty() ? 0 : *std::max_element(finish.begin(), finish.end());
    return rep;
}

}  // namespace qtransit
