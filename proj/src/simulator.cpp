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

#include "qtransit/simulator.hpp"

#include <stdexcept>

namespace qtransit {

namespace {

// Half-angle Ising form of a block: exp(-i sum theta_g/2 P_g) = exp(-i E).
IsingHamiltonian block_hamiltonian(int n, const std::vector<Gate> &gates, std::span<const double> params,
                                   bool unit_param) {
    IsingHamiltonian H(n);
    for (const auto &g : gates) {
        double theta = unit_param ? g.angle.scale : g.angle.value(params);
        if (g.kind == GateKind::kRz) {
            H.h[static_cast<size_t>(g.q0)] += theta / 2.0;
        } else {
            H.J[{g.q0, g.q1}] += theta / 2.0;
        }
    }
    return H;
}

bool same_terms(const std::vector<Gate> &a, const std::vector<Gate> &b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i].kind != b[i].kind || a[i].q0 != b[i].q0 || a[i].q1 != b[i].q1 || a[i].angle.scale != b[i].angle.scale) {
            return false;
        }
    }
    return true;
}

}  // namespace

CircuitSimulator::CircuitSimulator(const ParamCircuit &circuit)
    : n_(circuit.num_qubits()), num_params_(circuit.num_params()) {
    compile(circuit);
}

void CircuitSimulator::compile(const ParamCircuit &circuit) {
    std::vector<Gate> pending;
    auto flush = [&]() {
        if (pending.empty()) return;
        DiagonalBlock block;
        block.gates = std::move(pending);
        pending.clear();
        int p = block.gates.front().angle.param;
        bool shared = p >= 0;
        for (const auto &g : block.gates) shared = shared && g.angle.param == p;
        if (shared) {
            block.shared_param = p;
            for (const auto &other : blocks_) {
                if (other.cached && same_terms(other.gates, block.gates)) {
                    block.cached = other.cached;
                    break;
                }
            }
            if (!block.cached) {
                block.cached = std::make_shared<const std::vector<double>>(
                    block_hamiltonian(n_, block.gates, {}, true).energies());
            }
        }
        ops_.push_back({Op::Kind::kDiagonal, {}, blocks_.size()});
        blocks_.push_back(std::move(block));
    };
    for (const auto &layer : circuit.layers()) {
        for (const auto &g : layer.gates) {
            if (g.is_diagonal()) {
                pending.push_back(g);
                continue;
            }
            flush();
            if (g.kind == GateKind::kRx && !ops_.empty() && ops_.back().kind == Op::Kind::kRx) {
                ops_.back().gates.push_back(g);
            } else {
                ops_.push_back({g.kind == GateKind::kH ? Op::Kind::kH : Op::Kind::kRx, {g}, 0});
            }
        }
    }
    flush();
}

void CircuitSimulator::run(Statevector &sv, std::span<const double> params) const {
    if (sv.num_qubits() != n_) throw std::invalid_argument("simulator: qubit count mismatch");
    if (static_cast<int>(params.size()) != num_params_) {
        throw std::invalid_argument("simulator: expected " + std::to_string(num_params_) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    std::vector<int> qubits;
    std::vector<double> thetas;
    for (const auto &op : ops_) {
        switch (op.kind) {
            case Op::Kind::kRx:
                qubits.clear();
                thetas.clear();
                for (const auto &g : op.gates) {
                    qubits.push_back(g.q0);
                    thetas.push_back(g.angle.value(params));
                }
                sv.apply_rx_sequence(qubits, thetas);
                break;
            case Op::Kind::kH:
                sv.apply_h(op.gates.front().q0);
                break;
            case Op::Kind::kDiagonal: {
                const auto &block = blocks_[op.block];
                if (block.cached) {
                    double v = params[static_cast<size_t>(block.shared_param)];
                    if (v != 0.0) sv.apply_phases(*block.cached, v);
                } else {
                    auto e = block_hamiltonian(n_, block.gates, params, false).energies();
                    sv.apply_phases(e, 1.0);
                }
                break;
            }
        }
    }
}

Statevector CircuitSimulator::run_from_plus(std::span<const double> params) const {
    Statevector sv = plus_state(n_);
    run(sv, params);
    return sv;
}

Statevector simulate_from_plus(const ParamCircuit &circuit, std::span<const double> params) {
    return CircuitSimulator(circuit).run_from_plus(params);
}

}  // namespace qtransit
