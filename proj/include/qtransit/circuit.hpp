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

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtransit/ising.hpp"

namespace qtransit {

/// Where inside each step the interpolation parameter is sampled.
enum class ScheduleRule { kRightEndpoint, kLeftEndpoint, kMidpoint };

std::string to_string(ScheduleRule rule);
ScheduleRule schedule_rule_from_string(const std::string &s);

/// Digitized annealing schedule. s(t) = t / total_time is sampled once per
/// step according to `rule`.
struct Schedule {
    int n_steps = 0;
    double total_time = 1.0;
    double dt = 0.0;
    std::vector<double> points;
    ScheduleRule rule = ScheduleRule::kRightEndpoint;
};

Schedule linear_schedule(int n_steps, double total_time, ScheduleRule rule = ScheduleRule::kRightEndpoint);

/// `n_sub` equal steps covering the first `m` steps of `coarse`, with the
/// interpolation points resampled by the same rule.
Schedule resample_prefix(const Schedule &coarse, int m, int n_sub);

enum class GateKind { kRx, kRz, kRzz, kH };

/// Either a bound angle (`param < 0`, value = scale) or scale * params[param].
struct Angle {
    double scale = 0.0;
    int param = -1;

    static Angle fixed(double v) { return {v, -1}; }
    static Angle free(int p, double scale = 1.0) { return {scale, p}; }
    bool is_free() const { return param >= 0; }
    double value(std::span<const double> params) const;
};

struct Gate {
    GateKind kind = GateKind::kRx;
    int q0 = 0;
    int q1 = -1;
    Angle angle;

    bool is_two_qubit() const { return kind == GateKind::kRzz; }
    bool is_diagonal() const { return kind == GateKind::kRz || kind == GateKind::kRzz; }
};

struct GateLayer {
    std::string segment;
    std::vector<Gate> gates;
};

/// Ordered layers of Pauli rotations whose angles may reference named free
/// parameters.
class ParamCircuit {
   public:
    explicit ParamCircuit(int num_qubits = 1);

    int num_qubits() const { return n_; }
    int num_params() const { return static_cast<int>(param_names_.size()); }
    const std::vector<std::string> &param_names() const { return param_names_; }
    const std::vector<GateLayer> &layers() const { return layers_; }

    int add_param(std::string name);
    void add_layer(GateLayer layer);
    /// Appends `other`, renumbering its parameters after ours.
    void append(const ParamCircuit &other);
    /// Replaces every segment tag.
    void retag(const std::string &segment);
    /// Every free angle is evaluated at `params`; the result has no parameters.
    ParamCircuit bind(std::span<const double> params) const;

    size_t gate_count() const;
    int two_qubit_count() const;

    nlohmann::json to_json() const;

   private:
    int n_;
    std::vector<GateLayer> layers_;
    std::vector<std::string> param_names_;
};

/// One Trotter factor exp(-i dt H(s)): cost sub-layer (RZ 2 dt s h_i,
/// RZZ 2 dt s J_ij) then driver sub-layer (RX 2 dt (1 - s)).
void append_trotter_step(ParamCircuit &c, const IsingHamiltonian &cost, double dt, double s,
                         const std::string &segment);

/// Steps [k_from, k_to) of the schedule, all angles bound.
ParamCircuit build_anneal(const IsingHamiltonian &cost, const Schedule &schedule, int k_from, int k_to);
ParamCircuit build_anneal(const IsingHamiltonian &cost, const Schedule &schedule);

/// p alternating layers exp(-i gamma_l H_P) then exp(-i beta_l sum X).
/// Parameters are ordered gamma_1, beta_1, ..., gamma_p, beta_p.
ParamCircuit build_qaoa_tail(const IsingHamiltonian &cost, int p);
/// Same as build_qaoa_tail but the cost layer only keeps couplings between
/// index-adjacent qubits.
ParamCircuit build_lc_qaoa_tail(const IsingHamiltonian &cost, int p);

enum class Topology { kAllToAll, kLinear };

std::string to_string(Topology t);
Topology topology_from_string(const std::string &s);

struct DepthReport {
    int two_qubit_depth = 0;
    int two_qubit_count = 0;  // includes routing SWAPs
    int swap_count = 0;
    Topology topology = Topology::kAllToAll;
};

/// ASAP schedule of the two-qubit gates in circuit order. On a linear
/// topology non-adjacent pairs are routed first by SWAP chains that move the
/// lower physical qubit toward the higher one; the layout change persists.
DepthReport two_qubit_depth(const ParamCircuit &c, Topology topology);

}  // namespace qtransit
