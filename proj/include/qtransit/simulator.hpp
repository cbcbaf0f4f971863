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

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "qtransit/circuit.hpp"
#include "qtransit/statevector.hpp"

namespace qtransit {

/// Executes a ParamCircuit on a Statevector. Consecutive diagonal rotations
/// are fused into one phase pass; a fused block whose angles all scale a
/// single parameter keeps its diagonal cached across runs.
class CircuitSimulator {
   public:
    explicit CircuitSimulator(const ParamCircuit &circuit);

    void run(Statevector &sv, std::span<const double> params = {}) const;
    Statevector run_from_plus(std::span<const double> params = {}) const;
    int num_qubits() const { return n_; }
    int num_params() const { return num_params_; }

   private:
    struct DiagonalBlock {
        std::vector<Gate> gates;
        int shared_param = -1;  // valid when cached != nullptr
        std::shared_ptr<const std::vector<double>> cached;
    };
    struct Op {
        enum class Kind { kDiagonal, kRx, kH } kind;
        std::vector<Gate> gates;  // kRx: a run of consecutive RX gates
        size_t block = 0;
    };

    void compile(const ParamCircuit &circuit);

    int n_;
    int num_params_;
    std::vector<DiagonalBlock> blocks_;
    std::vector<Op> ops_;
};

/// Convenience: run `circuit` on |+>^n.
Statevector simulate_from_plus(const ParamCircuit &circuit, std::span<const double> params = {});

}  // namespace qtransit
