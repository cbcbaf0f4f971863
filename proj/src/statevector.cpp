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

#include "qtransit/statevector.hpp"

#include "kernels.hpp"

#include <Eigen/Dense>
#include <bit>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qtransit {

void SampleSet::validate() const {
    std::uint64_t total = 0;
    for (const auto &[b, c] : counts) {
        if (n < 64 && (b >> n) != 0) throw std::invalid_argument("sample set: outcome wider than n bits");
        total += c;
    }
    if (total != shots) throw std::invalid_argument("sample set: counts do not sum to shots");
}

Statevector::Statevector(int n) : n_(n) {
    if (n < 1 || n > kMaxStateQubits) {
        throw std::invalid_argument("statevector: qubit count " + std::to_string(n) + " out of range");
    }
    amps_.assign(size_t{1} << n, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

Statevector Statevector::basis_state(int n, Basis b) {
    Statevector sv(n);
    if (b >= sv.dim()) throw std::invalid_argument("statevector: basis index out of range");
    sv.amps_[0] = 0.0;
    sv.amps_[b] = 1.0;
    return sv;
}

Statevector Statevector::from_amplitudes(std::vector<cplx> amps) {
    size_t d = amps.size();
    if (d < 2 || (d & (d - 1)) != 0) throw std::invalid_argument("statevector: length must be a power of two");
    int n = std::countr_zero(d);
    Statevector sv(n);
    sv.amps_ = std::move(amps);
    return sv;
}

void Statevector::apply_rx(int q, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const size_t stride = size_t{1} << q;
    const size_t d = amps_.size();
    for (size_t base = 0; base < d; base += 2 * stride) {
        for (size_t k = base; k < base + stride; k++) {
            cplx a = amps_[k];
            cplx b = amps_[k + stride];
            // (c, -is; -is, c)
            amps_[k] = {c * a.real() + s * b.imag(), c * a.imag() - s * b.real()};
            amps_[k + stride] = {c * b.real() + s * a.imag(), c * b.imag() - s * a.real()};
        }
    }
}

void Statevector::apply_rx_sequence(std::span<const int> qubits, std::span<const double> thetas) {
    if (qubits.size() != thetas.size()) throw std::invalid_argument("statevector: qubit/angle count mismatch");
    // Gates on qubits below kBlockBits act inside aligned blocks, so all of
    // them are applied to one cache-resident block before moving on.
    constexpr int kBlockBits = 13;
    if (n_ <= kBlockBits) {
        for (size_t g = 0; g < qubits.size(); g++) apply_rx(qubits[g], thetas[g]);
        return;
    }
    std::vector<size_t> low_stride;
    for (size_t g = 0; g < qubits.size(); g++) {
        if (qubits[g] < 0 || qubits[g] >= n_) throw std::invalid_argument("statevector: qubit out of range");
        if (qubits[g] < kBlockBits) low_stride.push_back(size_t{1} << qubits[g]);
    }
    std::vector<double> c, s;
    for (size_t g = 0; g < qubits.size(); g++) {
        if (qubits[g] >= kBlockBits) continue;
        c.push_back(std::cos(thetas[g] / 2.0));
        s.push_back(std::sin(thetas[g] / 2.0));
    }
    if (!low_stride.empty()) {
        const size_t block = size_t{1} << kBlockBits;
        for (size_t start = 0; start < amps_.size(); start += block) {
            cplx *a = amps_.data() + start;
            for (size_t g = 0; g < low_stride.size(); g++) {
                const size_t stride = low_stride[g];
                for (size_t base = 0; base < block; base += 2 * stride) {
                    for (size_t k = base; k < base + stride; k++) {
                        const cplx x = a[k];
                        const cplx y = a[k + stride];
                        a[k] = {c[g] * x.real() + s[g] * y.imag(), c[g] * x.imag() - s[g] * y.real()};
                        a[k + stride] = {c[g] * y.real() + s[g] * x.imag(), c[g] * y.imag() - s[g] * x.real()};
                    }
                }
            }
        }
    }
    for (size_t g = 0; g < qubits.size(); g++) {
        if (qubits[g] >= kBlockBits) apply_rx(qubits[g], thetas[g]);
    }
}

void Statevector::apply_rx_all(double theta) {
    std::vector<int> qs(static_cast<size_t>(n_));
    std::iota(qs.begin(), qs.end(), 0);
    const std::vector<double> th(qs.size(), theta);
    apply_rx_sequence(qs, th);
}

void Statevector::apply_rz(int q, double theta) {
    const cplx up = std::polar(1.0, -theta / 2.0);
    const cplx down = std::conj(up);
    for (size_t z = 0; z < amps_.size(); z++) amps_[z] *= ((z >> q) & 1U) ? down : up;
}

void Statevector::apply_rzz(int a, int b, double theta) {
    const cplx same = std::polar(1.0, -theta / 2.0);
    const cplx diff = std::conj(same);
    for (size_t z = 0; z < amps_.size(); z++) {
        amps_[z] *= (((z >> a) ^ (z >> b)) & 1U) ? diff : same;
    }
}

void Statevector::apply_h(int q) {
    const double r = 1.0 / std::sqrt(2.0);
    const size_t stride = size_t{1} << q;
    const size_t d = amps_.size();
    for (size_t base = 0; base < d; base += 2 * stride) {
        for (size_t k = base; k < base + stride; k++) {
            cplx a = amps_[k];
            cplx b = amps_[k + stride];
            amps_[k] = r * (a + b);
            amps_[k + stride] = r * (a - b);
        }
    }
}

void Statevector::apply_h_all() {
    for (int q = 0; q < n_; q++) apply_h(q);
}

void Statevector::apply_phases(std::span<const double> diag, double scale) {
    if (diag.size() != amps_.size()) throw std::invalid_argument("statevector: diagonal has wrong size");
    kernels::phase(reinterpret_cast<double *>(amps_.data()), diag.data(), amps_.size(), scale);
}

double Statevector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> p(amps_.size());
    for (size_t z = 0; z < amps_.size(); z++) p[z] = std::norm(amps_[z]);
    return p;
}

Statevector plus_state(int n) {
    if (n < 1 || n > kMaxPlusQubits) {
        throw std::invalid_argument("plus_state: qubit count " + std::to_string(n) + " out of range [1, " +
                                    std::to_string(kMaxPlusQubits) + "]");
    }
    Statevector sv(n);
    const double a = std::pow(2.0, -n / 2.0);
    for (auto &amp : sv.amplitudes()) amp = a;
    return sv;
}

namespace {

void check_dims(const Statevector &sv, int n) {
    if (sv.num_qubits() != n) throw std::invalid_argument("qubit count mismatch between state and operator");
}

}  // namespace

void apply_cost_evolution(Statevector &sv, const IsingHamiltonian &cost, double t) {
    check_dims(sv, cost.n);
    if (t == 0.0) return;
    auto e = cost.energies();
    sv.apply_phases(e, t);
}

void apply_driver_evolution(Statevector &sv, double t) {
    if (t == 0.0) return;
    sv.apply_rx_all(2.0 * t);
}

double expectation(const Statevector &sv, const IsingHamiltonian &cost) {
    check_dims(sv, cost.n);
    auto e = cost.energies();
    auto amps = sv.amplitudes();
    double s = 0.0;
    for (size_t z = 0; z < amps.size(); z++) s += std::norm(amps[z]) * e[z];
    return s;
}

double expectation(const Statevector &sv, const DriverHamiltonian &driver) {
    check_dims(sv, driver.n);
    auto amps = sv.amplitudes();
    double s = 0.0;
    for (int q = 0; q < sv.num_qubits(); q++) {
        const size_t stride = size_t{1} << q;
        for (size_t base = 0; base < amps.size(); base += 2 * stride) {
            for (size_t k = base; k < base + stride; k++) {
                s += 2.0 * (std::conj(amps[k]) * amps[k + stride]).real();
            }
        }
    }
    return s;
}

double expectation(const Statevector &sv, const DriverSquared &driver_sq) {
    check_dims(sv, driver_sq.n);
    // In the Hadamard-rotated frame sum X_i becomes sum Z_i.
    Statevector rotated = sv;
    rotated.apply_h_all();
    auto amps = rotated.amplitudes();
    double s = 0.0;
    const int n = sv.num_qubits();
    for (size_t z = 0; z < amps.size(); z++) {
        double m = n - 2.0 * std::popcount(z);
        s += std::norm(amps[z]) * m * m;
    }
    return s;
}

double fidelity(const Statevector &a, const Statevector &b) {
    if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("fidelity: dimension mismatch");
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    cplx ov{0.0, 0.0};
    for (size_t z = 0; z < x.size(); z++) ov += std::conj(x[z]) * y[z];
    return std::clamp(std::norm(ov), 0.0, 1.0);
}

double state_distance(const Statevector &a, const Statevector &b) {
    return std::sqrt(std::max(0.0, 1.0 - fidelity(a, b)));
}

std::vector<double> sorted_uniforms(std::uint64_t shots, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> u(shots);
    for (auto &x : u) x = rng.uniform();
    std::sort(u.begin(), u.end());
    return u;
}

SampleSet sample_with_uniforms(const Statevector &sv, std::span<const double> sorted_u) {
    SampleSet out;
    out.n = sv.num_qubits();
    if (sorted_u.empty()) throw std::invalid_argument("sample: shots must be >= 1");
    auto amps = sv.amplitudes();
    const double total = sv.norm_squared();
    size_t k = 0;
    double cdf = 0.0;
    Basis last_nonzero = 0;
    for (size_t z = 0; z < amps.size() && k < sorted_u.size(); z++) {
        double p = std::norm(amps[z]);
        if (p == 0.0) continue;
        last_nonzero = z;
        cdf += p;
        std::uint64_t hits = 0;
        while (k < sorted_u.size() && sorted_u[k] * total < cdf) {
            hits++;
            k++;
        }
        out.add(z, hits);
    }
    // Rounding can leave the top of the unit interval uncovered.
    out.add(last_nonzero, sorted_u.size() - k);
    return out;
}

SampleSet sample(const Statevector &sv, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
    auto u = sorted_uniforms(shots, seed);
    return sample_with_uniforms(sv, u);
}

Statevector exact_unitary_oracle(const Statevector &sv, std::span<const EvolutionSegment> segments, double t) {
    const int n = sv.num_qubits();
    if (n > kMaxExactOracleQubits) {
        throw std::invalid_argument("exact_unitary_oracle: at most " + std::to_string(kMaxExactOracleQubits) +
                                    " qubits");
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    Eigen::VectorXcd psi(d);
    for (Eigen::Index z = 0; z < d; z++) psi(z) = sv[static_cast<Basis>(z)];
    for (const auto &seg : segments) {
        check_dims(sv, seg.cost.n);
        auto e = seg.cost.energies();
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
        for (Eigen::Index z = 0; z < d; z++) {
            H(z, z) = e[static_cast<size_t>(z)];
            for (int q = 0; q < n; q++) H(z, z ^ (Eigen::Index{1} << q)) += seg.driver_weight;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        const Eigen::MatrixXd &V = es.eigenvectors();
        Eigen::VectorXcd coeff = V.transpose().cast<cplx>() * psi;
        for (Eigen::Index k = 0; k < d; k++) coeff(k) *= std::polar(1.0, -t * es.eigenvalues()(k));
        psi = V.cast<cplx>() * coeff;
    }
    std::vector<cplx> out(static_cast<size_t>(d));
    for (Eigen::Index z = 0; z < d; z++) out[static_cast<size_t>(z)] = psi(z);
    return Statevector::from_amplitudes(std::move(out));
}

}  // namespace qtransit
