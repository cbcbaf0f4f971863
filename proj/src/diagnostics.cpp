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

#include "qtransit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qtransit/simulator.hpp"

namespace qtransit {

double energy_variance(const Statevector &sv, const IsingHamiltonian &cost) {
    if (sv.num_qubits() != cost.n) throw std::invalid_argument("energy_variance: qubit count mismatch");
    const auto e = cost.energies();
    auto amps = sv.amplitudes();
    double m1 = 0.0;
    double m2 = 0.0;
    double norm = 0.0;
    for (size_t z = 0; z < amps.size(); z++) {
        double p = std::norm(amps[z]);
        norm += p;
        m1 += p * e[z];
        m2 += p * e[z] * e[z];
    }
    m1 /= norm;
    m2 /= norm;
    return std::max(0.0, m2 - m1 * m1);
}

double energy_variance(const SampleSet &samples, const IsingHamiltonian &cost) {
    if (samples.empty()) throw std::invalid_argument("energy_variance: empty sample set");
    double m1 = 0.0;
    const double shots = static_cast<double>(samples.shots);
    for (const auto &[b, c] : samples.counts) m1 += static_cast<double>(c) * cost.cost(b);
    m1 /= shots;
    double var = 0.0;
    for (const auto &[b, c] : samples.counts) {
        double d = cost.cost(b) - m1;
        var += static_cast<double>(c) * d * d;
    }
    return var / shots;
}

double driver_energy(const Statevector &sv) { return expectation(sv, DriverHamiltonian{sv.num_qubits()}); }

namespace {

double probed_driver(Statevector sv, const std::vector<double> &energies, double s, double weight, double dt,
                     double time) {
    const int steps = std::max(1, static_cast<int>(std::lround(time / (dt / 2.0))));
    const double tau = time / steps;
    for (int k = 0; k < steps; k++) {
        sv.apply_phases(energies, tau * s);
        apply_driver_evolution(sv, tau * weight);
    }
    return driver_energy(sv);
}

}  // namespace

double susceptibility(const Statevector &state, const IsingHamiltonian &cost, double s, double dt,
                      const ProbeSettings &probe) {
    if (!(probe.strength > 0.0)) throw std::invalid_argument("susceptibility: probe strength must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("susceptibility: dt must be positive");
    const double time = probe.time > 0.0 ? probe.time : dt;
    const auto e = cost.energies();
    double plus = probed_driver(state, e, s, 1.0 - s + probe.strength, dt, time);
    double minus = probed_driver(state, e, s, 1.0 - s - probe.strength, dt, time);
    return (plus - minus) / (2.0 * probe.strength);
}

Statevector trotter_prefix_state(const IsingHamiltonian &cost, const Schedule &schedule, int m) {
    if (m < 0 || m > schedule.n_steps) throw std::invalid_argument("prefix state: m outside the schedule");
    Statevector sv = plus_state(cost.n);
    if (m > 0) CircuitSimulator(build_anneal(cost, schedule, 0, m)).run(sv);
    return sv;
}

double susceptibility(const IsingHamiltonian &cost, const Schedule &schedule, int m, const ProbeSettings &probe) {
    Statevector sv = trotter_prefix_state(cost, schedule, m);
    const double s = std::min(1.0, m * schedule.dt / schedule.total_time);
    return susceptibility(sv, cost, s, schedule.dt, probe);
}

MetricsRow evaluate_samples(const SampleSet &samples, const BinaryProgram &bp, const Qubo &qubo) {
    if (samples.n != bp.num_vars) throw std::invalid_argument("evaluate_samples: width mismatch");
    MetricsRow row;
    struct Entry {
        Basis b;
        std::uint64_t count;
        double qubo_cost;
        bool feasible;
        double objective;
        std::string bits;
    };
    std::vector<Entry> entries;
    entries.reserve(samples.counts.size());
    double qubo_sum = 0.0;
    double obj_sum = 0.0;
    for (const auto &[b, c] : samples.counts) {
        if (c == 0) continue;
        Entry e{b, c, qubo.cost(b), is_feasible(bp, b), 0.0, to_bitstring(b, samples.n)};
        qubo_sum += static_cast<double>(c) * e.qubo_cost;
        if (e.feasible) {
            e.objective = bp.objective(b);
            row.feasible_count += c;
            row.unique_feasible++;
            obj_sum += static_cast<double>(c) * e.objective;
        }
        entries.push_back(std::move(e));
    }
    if (samples.shots > 0) row.avg_qubo_cost = qubo_sum / static_cast<double>(samples.shots);
    if (row.feasible_count == 0) return row;
    row.avg_objective_feasible = obj_sum / static_cast<double>(row.feasible_count);

    std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.qubo_cost != b.qubo_cost) return a.qubo_cost < b.qubo_cost;
        return a.bits < b.bits;
    });
    // Lowest-objective feasible string; ties go to the better-ranked one.
    int best = -1;
    for (size_t i = 0; i < entries.size(); i++) {
        if (!entries[i].feasible) continue;
        if (best < 0 || entries[i].objective < entries[static_cast<size_t>(best)].objective) {
            best = static_cast<int>(i);
        }
    }
    row.best_rank = best + 1;
    return row;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::string metrics_csv_header() {
    return "m,p,variant,d2q,iterations,feasible_count,unique_feasible,avg_objective_feasible,avg_qubo_cost,"
           "best_rank,prefix_fidelity";
}

std::string to_csv_line(const MetricsRow &r) {
    std::string out = std::to_string(r.m) + "," + std::to_string(r.p) + "," + r.variant + "," +
                      std::to_string(r.d2q) + "," + std::to_string(r.iterations) + "," +
                      std::to_string(r.feasible_count) + "," + std::to_string(r.unique_feasible) + ",";
    if (r.avg_objective_feasible) out += fmt(*r.avg_objective_feasible);
    out += "," + fmt(r.avg_qubo_cost) + ",";
    if (r.best_rank) out += std::to_string(*r.best_rank);
    out += "," + fmt(r.prefix_fidelity);
    return out;
}

std::string diagnostics_csv_header() {
    return "m,energy_variance,energy_variance_sampled,susceptibility,driver_energy,probe_strength,probe_time";
}

std::string to_csv_line(const DiagnosticsRow &r) {
    return std::to_string(r.m) + "," + fmt(r.energy_variance) + "," + fmt(r.energy_variance_sampled) + "," +
           fmt(r.susceptibility) + "," + fmt(r.driver_energy) + "," + fmt(r.probe_strength) + "," +
           fmt(r.probe_time);
}

nlohmann::json MetricsRow::to_json() const {
    nlohmann::json j = {{"m", m},
                        {"p", p},
                        {"variant", variant},
                        {"d2q", d2q},
                        {"iterations", iterations},
                        {"feasible_count", feasible_count},
                        {"unique_feasible", unique_feasible},
                        {"avg_objective_feasible", nullptr},
                        {"avg_qubo_cost", avg_qubo_cost},
                        {"best_rank", nullptr},
                        {"prefix_fidelity", prefix_fidelity}};
    if (avg_objective_feasible) j["avg_objective_feasible"] = *avg_objective_feasible;
    if (best_rank) j["best_rank"] = *best_rank;
    if (!error.empty()) j["error"] = error;
    return j;
}

nlohmann::json DiagnosticsRow::to_json() const {
    return {{"m", m},
            {"energy_variance", energy_variance},
            {"energy_variance_sampled", energy_variance_sampled},
            {"susceptibility", susceptibility},
            {"driver_energy", driver_energy},
            {"probe_strength", probe_strength},
            {"probe_time", probe_time}};
}

}  // namespace qtransit
