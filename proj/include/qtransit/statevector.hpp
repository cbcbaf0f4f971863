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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qtransit/ising.hpp"
#include "qtransit/sample_set.hpp"

namespace qtransit {

using cplx = std::complex<double>;

/// plus_state accepts at most this many qubits.
inline constexpr int kMaxPlusQubits = 20;
/// Hard cap for any dense state.
inline constexpr int kMaxStateQubits = 24;
/// Dense matrix-exponential reference is limited to this size.
inline constexpr int kMaxExactOracleQubits = 8;

/// Dense 2^n amplitude vector. Qubit q is bit q of the basis index.
/// Rotation conventions: RX(t) = exp(-i t X / 2), RZ(t) = exp(-i t Z / 2),
/// RZZ(t) = exp(-i t Z Z / 2).
class Statevector {
   public:
    /// |0...0>.
    explicit Statevector(int n);
    static Statevector basis_state(int n, Basis b);
    static Statevector from_amplitudes(std::vector<cplx> amps);

    int num_qubits() const { return n_; }
    size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    cplx operator[](Basis b) const { return amps_[b]; }

    void apply_rx(int q, double theta);
    void apply_rx_all(double theta);
    /// Same result as apply_rx(qubits[g], thetas[g]) for each g in turn.
    void apply_rx_sequence(std::span<const int> qubits, std::span<const double> thetas);
    void apply_rz(int q, double theta);
    void apply_rzz(int a, int b, double theta);
    void apply_h(int q);
    void apply_h_all();
    /// amp[z] *= exp(-i scale * diag[z]).
    void apply_phases(std::span<const double> diag, double scale);

    double norm_squared() const;
    std::vector<double> probabilities() const;

   private:
    int n_;
    std::vector<cplx> amps_;
};

Statevector plus_state(int n);

/// exp(-i t H_C); diagonal, so probabilities are untouched.
void apply_cost_evolution(Statevector &sv, const IsingHamiltonian &cost, double t);
/// exp(-i t sum X_i), i.e. RX(2t) on every qubit.
void apply_driver_evolution(Statevector &sv, double t);

struct DriverSquared {
    int n = 1;
};

double expectation(const Statevector &sv, const IsingHamiltonian &cost);
double expectation(const Statevector &sv, const DriverHamiltonian &driver);
double expectation(const Statevector &sv, const DriverSquared &driver_sq);

/// |<a|b>|^2.
double fidelity(const Statevector &a, const Statevector &b);
/// sqrt(1 - F), the trace distance between the two pure states.
double state_distance(const Statevector &a, const Statevector &b);

/// Multinomial draw of `shots` outcomes from |amp|^2, deterministic in seed.
SampleSet sample(const Statevector &sv, std::uint64_t shots, std::uint64_t seed);

/// Sorted uniforms in [0,1) used to invert the cumulative distribution.
std::vector<double> sorted_uniforms(std::uint64_t shots, std::uint64_t seed);
/// Inverse-CDF sampling with caller-supplied sorted uniforms (common random
/// numbers across evaluations).
SampleSet sample_with_uniforms(const Statevector &sv, std::span<const double> sorted_u);

struct EvolutionSegment {
    IsingHamiltonian cost;
    double driver_weight = 1.0;
};

/// Applies exp(-i t (w_B H_B + H_C)) for each segment in order by dense
/// diagonalization. Limited to kMaxExactOracleQubits.
Statevector exact_unitary_oracle(const Statevector &sv, std::span<const EvolutionSegment> segments, double t);

}  // namespace qtransit
