// Copyright 2026 The qbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense state vectors, gate application, expectation values, subspace
 * fidelity and shot sampling.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbench/pauli.hpp"

namespace qbench {

using Rng = std::mt19937_64;

class StateVector {
  public:
    /// |0...0> on n qubits.
    explicit StateVector(std::size_t n_qubits) : n_(n_qubits) {
        check_qubits(n_qubits);
        amp_.assign(std::size_t{1} << n_, cplx{0.0, 0.0});
        amp_[0] = 1.0;
    }

    StateVector(std::size_t n_qubits, std::vector<cplx> amplitudes)
        : n_(n_qubits), amp_(std::move(amplitudes)) {
        check_qubits(n_qubits);
        if (amp_.size() != (std::size_t{1} << n_)) {
            throw std::invalid_argument("amplitude count " + std::to_string(amp_.size()) +
                                        " does not match 2^" + std::to_string(n_));
        }
    }

    static StateVector basis(std::size_t n_qubits, std::uint64_t index) {
        StateVector s(n_qubits);
        if (index >= s.dim()) throw std::out_of_range("basis index out of range");
        s.amp_[0] = 0.0;
        s.amp_[index] = 1.0;
        return s;
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return amp_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amp_; }
    [[nodiscard]] std::span<cplx> amplitudes() { return amp_; }
    [[nodiscard]] const std::vector<cplx> &data() const { return amp_; }
    [[nodiscard]] std::vector<cplx> &data() { return amp_; }
    cplx &operator[](std::size_t i) { return amp_[i]; }
    const cplx &operator[](std::size_t i) const { return amp_[i]; }

    [[nodiscard]] double norm_squared() const {
        double s = 0.0;
        for (const auto &a : amp_) s += std::norm(a);
        return s;
    }
    [[nodiscard]] double norm() const { return std::sqrt(norm_squared()); }

    void normalize() {
        const double nrm = norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            throw std::runtime_error("cannot normalize a state with norm " + std::to_string(nrm));
        }
        const double inv = 1.0 / nrm;
        for (auto &a : amp_) a *= inv;
    }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(amp_.begin(), amp_.end(), [](const cplx &a) {
            return std::isfinite(a.real()) && std::isfinite(a.imag());
        });
    }

  private:
    static void check_qubits(std::size_t n) {
        if (n < 1 || n > kDenseQubitLimit) {
            throw std::invalid_argument("qubit count must lie in [1, " +
                                        std::to_string(kDenseQubitLimit) + "], got " +
                                        std::to_string(n));
        }
    }

    std::size_t n_;
    std::vector<cplx> amp_;
};

/// <a|b>
inline cplx inner(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner product of mismatched states");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Equal superposition |+>^n.
inline StateVector plus_state(std::size_t n) {
    if (n < 1 || n > kDenseQubitLimit) {
        throw std::invalid_argument("plus_state: qubit count out of range: " + std::to_string(n));
    }
    const double a = std::pow(2.0, -0.5 * static_cast<double>(n));
    return StateVector(n, std::vector<cplx>(std::size_t{1} << n, cplx{a, 0.0}));
}

/// Big-endian rendering |b_{n-1} ... b_0>.
inline std::string to_bitstring(std::uint64_t index, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t q = 0; q < n; ++q) {
        if ((index >> q) & 1U) s[n - 1 - q] = '1';
    }
    return s;
}

inline std::uint64_t from_bitstring(std::string_view bits) {
    std::uint64_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("invalid bitstring");
        v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return v;
}

// ---------------------------------------------------------------------------
// Gates

enum class GateKind { H, RX, RY, RZ, CX, PauliRotation };

/**
 * A concrete gate. Rotation conventions: RX/RY/RZ(t) = exp(-i t P / 2);
 * PauliRotation(t, P) = exp(-i t P) on the letters of P (coefficient ignored).
 */
struct Gate {
    GateKind kind;
    std::vector<std::size_t> targets;
    double angle = 0.0;
    std::optional<PauliString> pauli;

    static Gate h(std::size_t q) { return {GateKind::H, {q}, 0.0, std::nullopt}; }
    static Gate rx(std::size_t q, double t) { return {GateKind::RX, {q}, t, std::nullopt}; }
    static Gate ry(std::size_t q, double t) { return {GateKind::RY, {q}, t, std::nullopt}; }
    static Gate rz(std::size_t q, double t) { return {GateKind::RZ, {q}, t, std::nullopt}; }
    static Gate cx(std::size_t control, std::size_t target) {
        return {GateKind::CX, {control, target}, 0.0, std::nullopt};
    }
    static Gate pauli_rotation(PauliString p, double t) {
        return {GateKind::PauliRotation, {}, t, std::move(p)};
    }
};

namespace detail {

inline void check_target(const StateVector &s, std::size_t q) {
    if (q >= s.n_qubits()) {
        throw std::out_of_range("gate target " + std::to_string(q) + " outside " +
                                std::to_string(s.n_qubits()) + "-qubit register");
    }
}

// Applies the 2x2 matrix [[m00, m01], [m10, m11]] to qubit q.
inline void apply_single(StateVector &s, std::size_t q, cplx m00, cplx m01, cplx m10, cplx m11) {
    const std::size_t stride = std::size_t{1} << q;
    auto &a = s.data();
    const std::size_t dim = a.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const cplx v0 = a[i0];
            const cplx v1 = a[i1];
            a[i0] = m00 * v0 + m01 * v1;
            a[i1] = m10 * v0 + m11 * v1;
        }
    }
}

} // namespace detail

inline void apply_h(StateVector &s, std::size_t q) {
    detail::check_target(s, q);
    const double r = std::numbers::sqrt2 / 2.0;
    detail::apply_single(s, q, r, r, r, -r);
}

inline void apply_rx(StateVector &s, std::size_t q, double theta) {
    detail::check_target(s, q);
    const double c = std::cos(theta / 2.0);
    const double sn = std::sin(theta / 2.0);
    detail::apply_single(s, q, c, {0.0, -sn}, {0.0, -sn}, c);
}

inline void apply_ry(StateVector &s, std::size_t q, double theta) {
    detail::check_target(s, q);
    const double c = std::cos(theta / 2.0);
    const double sn = std::sin(theta / 2.0);
    detail::apply_single(s, q, c, -sn, sn, c);
}

inline void apply_rz(StateVector &s, std::size_t q, double theta) {
    detail::check_target(s, q);
    const std::size_t mask = std::size_t{1} << q;
    const cplx p0 = std::polar(1.0, -theta / 2.0);
    const cplx p1 = std::polar(1.0, theta / 2.0);
    auto &a = s.data();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= (i & mask) ? p1 : p0;
}

inline void apply_cx(StateVector &s, std::size_t control, std::size_t target) {
    detail::check_target(s, control);
    detail::check_target(s, target);
    if (control == target) throw std::invalid_argument("CX control and target must differ");
    const std::size_t cm = std::size_t{1} << control;
    const std::size_t tm = std::size_t{1} << target;
    auto &a = s.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((i & cm) && !(i & tm)) std::swap(a[i], a[i | tm]);
    }
}

/// P|psi> including P's coefficient.
inline StateVector apply_pauli(const StateVector &s, const PauliString &p) {
    if (p.n_qubits() != s.n_qubits()) throw std::invalid_argument("Pauli/state size mismatch");
    const std::uint64_t xm = p.x_mask();
    const std::uint64_t zm = p.z_mask();
    const cplx base = p.coefficient() * detail::i_power(static_cast<int>(p.y_count()));
    StateVector out(s.n_qubits());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const double sign = (std::popcount(i & zm) & 1U) ? -1.0 : 1.0;
        out[i ^ xm] = base * sign * s[i];
    }
    return out;
}

/// exp(-i theta P) for a unit Pauli string P; P^2 = I gives cos(theta) - i sin(theta) P.
inline void apply_pauli_rotation(StateVector &s, const PauliString &p, double theta) {
    if (p.n_qubits() != s.n_qubits()) throw std::invalid_argument("Pauli/state size mismatch");
    const PauliString unit(p.letters(), 1.0);
    const StateVector ps = apply_pauli(s, unit);
    const double c = std::cos(theta);
    const cplx ms{0.0, -std::sin(theta)};
    auto &a = s.data();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = c * a[i] + ms * ps[i];
}

inline void apply_gate_inplace(StateVector &s, const Gate &g) {
    const auto need = [&](std::size_t k) {
        if (g.targets.size() != k) {
            throw std::invalid_argument("gate expects " + std::to_string(k) + " target(s)");
        }
    };
    switch (g.kind) {
    case GateKind::H: need(1); apply_h(s, g.targets[0]); break;
    case GateKind::RX: need(1); apply_rx(s, g.targets[0], g.angle); break;
    case GateKind::RY: need(1); apply_ry(s, g.targets[0], g.angle); break;
    case GateKind::RZ: need(1); apply_rz(s, g.targets[0], g.angle); break;
    case GateKind::CX: need(2); apply_cx(s, g.targets[0], g.targets[1]); break;
    case GateKind::PauliRotation:
        if (!g.pauli) throw std::invalid_argument("Pauli rotation without a Pauli string");
        apply_pauli_rotation(s, *g.pauli, g.angle);
        break;
    }
}

inline StateVector apply_gate(StateVector s, const Gate &g) {
    apply_gate_inplace(s, g);
    return s;
}

// ---------------------------------------------------------------------------
// Observables

/// <s|p|s> for a single term, complex in general.
inline cplx term_expectation(const StateVector &s, const PauliString &p) {
    const std::uint64_t xm = p.x_mask();
    const std::uint64_t zm = p.z_mask();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const double sign = (std::popcount(i & zm) & 1U) ? -1.0 : 1.0;
        acc += std::conj(s[i ^ xm]) * sign * s[i];
    }
    return acc * p.coefficient() * detail::i_power(static_cast<int>(p.y_count()));
}

/// <s|h|s> accumulated term by term.
inline cplx expectation_complex(const StateVector &s, const PauliSum &h) {
    if (h.n_qubits() != s.n_qubits()) {
        throw std::invalid_argument("expectation: operator on " + std::to_string(h.n_qubits()) +
                                    " qubits, state on " + std::to_string(s.n_qubits()));
    }
    cplx acc{0.0, 0.0};
    for (const auto &t : h.terms()) acc += term_expectation(s, t);
    return acc;
}

/// Real part of <s|h|s>; throws when h has real coefficients but the result does not.
inline double expectation(const StateVector &s, const PauliSum &h) {
    const cplx e = expectation_complex(s, h);
    if (h.has_real_coefficients() && std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
        throw std::runtime_error("expectation of a Hermitian operator has imaginary residue " +
                                 std::to_string(e.imag()));
    }
    return e.real();
}

// ---------------------------------------------------------------------------
// Fidelity

/// Projector onto the span of an orthonormal set; validates once at construction.
class SubspaceProjector {
  public:
    explicit SubspaceProjector(std::vector<StateVector> basis, double tol = 1e-8)
        : basis_(std::move(basis)) {
        if (basis_.empty()) throw std::invalid_argument("empty subspace basis");
        for (std::size_t a = 0; a < basis_.size(); ++a) {
            if (basis_[a].dim() != basis_[0].dim()) {
                throw std::invalid_argument("subspace basis states differ in size");
            }
            for (std::size_t b = a; b < basis_.size(); ++b) {
                const cplx ip = inner(basis_[a], basis_[b]);
                const double expected = a == b ? 1.0 : 0.0;
                if (std::abs(ip - expected) > tol) {
                    throw std::invalid_argument("subspace basis is not orthonormal (entry " +
                                                std::to_string(a) + "," + std::to_string(b) + ")");
                }
            }
        }
    }

    [[nodiscard]] double fidelity(const StateVector &s) const {
        double f = 0.0;
        for (const auto &b : basis_) f += std::norm(inner(b, s));
        return std::clamp(f, 0.0, 1.0);
    }

    [[nodiscard]] const std::vector<StateVector> &basis() const { return basis_; }

  private:
    std::vector<StateVector> basis_;
};

/// Sum_k |<basis_k|s>|^2.
inline double fidelity_to_subspace(const StateVector &s, const std::vector<StateVector> &basis) {
    return SubspaceProjector(basis).fidelity(s);
}

// ---------------------------------------------------------------------------
// Sampling

/// Basis index -> shot count.
using Counts = std::map<std::uint64_t, std::size_t>;

/// Multinomial draw by inverse CDF over |amplitude|^2.
inline Counts sample(const StateVector &s, std::size_t shots, Rng &rng) {
    if (shots == 0) throw std::invalid_argument("sample: shots must be positive");
    std::vector<double> cdf(s.dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        acc += std::norm(s[i]);
        cdf[i] = acc;
    }
    std::uniform_real_distribution<double> uniform(0.0, acc);
    Counts counts;
    for (std::size_t k = 0; k < shots; ++k) {
        const double u = uniform(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            // u rounded onto the total; take the last outcome with nonzero weight.
            it = std::lower_bound(cdf.begin(), cdf.end(), acc);
        }
        ++counts[static_cast<std::uint64_t>(it - cdf.begin())];
    }
    return counts;
}

} // namespace qbench
