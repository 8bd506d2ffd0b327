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
 * Parameterized circuits: the hardware-efficient SU(2) ansatz, the QAOA
 * alternating circuit, and finite-difference state Jacobians.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbench/operator.hpp"
#include "qbench/pauli.hpp"
#include "qbench/statevector.hpp"

namespace qbench {

/// One gate of a parameterized circuit. Its angle is theta[param] when param
/// is set, fixed_angle otherwise.
struct CircuitGate {
    GateKind kind;
    std::vector<std::size_t> targets;
    std::optional<std::size_t> param{};
    double fixed_angle = 0.0;
    std::optional<PauliString> pauli{};
};

class ParamCircuit {
  public:
    ParamCircuit(std::size_t n_qubits, std::vector<CircuitGate> gates, std::size_t parameter_count)
        : n_(n_qubits), gates_(std::move(gates)), parameter_count_(parameter_count) {
        if (n_ < 1 || n_ > kDenseQubitLimit) throw std::invalid_argument("circuit qubit count out of range");
        std::vector<std::size_t> uses(parameter_count_, 0);
        for (const auto &g : gates_) {
            for (auto q : g.targets) {
                if (q >= n_) throw std::invalid_argument("circuit gate target out of range");
            }
            if (g.kind == GateKind::PauliRotation &&
                (!g.pauli || g.pauli->n_qubits() != n_)) {
                throw std::invalid_argument("Pauli-rotation gate needs a Pauli string on all qubits");
            }
            if (g.param) {
                if (*g.param >= parameter_count_) {
                    throw std::invalid_argument("parameter index " + std::to_string(*g.param) +
                                                " >= parameter count " +
                                                std::to_string(parameter_count_));
                }
                if (g.kind == GateKind::H || g.kind == GateKind::CX) {
                    throw std::invalid_argument("H and CX gates take no parameter");
                }
                ++uses[*g.param];
            }
        }
        for (std::size_t j = 0; j < parameter_count_; ++j) {
            if (uses[j] == 0) {
                throw std::invalid_argument("parameter " + std::to_string(j) + " is never used");
            }
        }
        single_use_ = std::all_of(uses.begin(), uses.end(), [](std::size_t u) { return u == 1; });
        if (single_use_) {
            gate_of_param_.assign(parameter_count_, 0);
            for (std::size_t k = 0; k < gates_.size(); ++k) {
                if (gates_[k].param) gate_of_param_[*gates_[k].param] = k;
            }
        }
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_; }
    [[nodiscard]] std::size_t parameter_count() const { return parameter_count_; }
    [[nodiscard]] const std::vector<CircuitGate> &gates() const { return gates_; }
    /// True when every parameter drives exactly one gate.
    [[nodiscard]] bool single_use() const { return single_use_; }
    [[nodiscard]] std::size_t gate_of_param(std::size_t j) const { return gate_of_param_.at(j); }

    void apply_gate(StateVector &s, std::size_t k, std::span<const double> theta) const {
        const auto &g = gates_[k];
        const double angle = g.param ? theta[*g.param] : g.fixed_angle;
        switch (g.kind) {
        case GateKind::H: apply_h(s, g.targets[0]); break;
        case GateKind::RX: apply_rx(s, g.targets[0], angle); break;
        case GateKind::RY: apply_ry(s, g.targets[0], angle); break;
        case GateKind::RZ: apply_rz(s, g.targets[0], angle); break;
        case GateKind::CX: apply_cx(s, g.targets[0], g.targets[1]); break;
        // Half-angle convention, matching RX/RY/RZ.
        case GateKind::PauliRotation: apply_pauli_rotation(s, *g.pauli, angle / 2.0); break;
        }
    }

  private:
    std::size_t n_;
    std::vector<CircuitGate> gates_;
    std::size_t parameter_count_;
    bool single_use_ = false;
    std::vector<std::size_t> gate_of_param_;
};

/**
 * Hadamard layer, then reps blocks of [RY on every qubit, RZ on every qubit,
 * CX chain i -> i+1], then a final [RY, RZ] layer. 2 n (reps + 1) parameters.
 */
inline ParamCircuit su2_ansatz(std::size_t n, std::size_t reps) {
    if (n < 1) throw std::invalid_argument("su2_ansatz: need at least one qubit");
    if (reps < 1) throw std::invalid_argument("su2_ansatz: reps must be at least 1");
    std::vector<CircuitGate> gates;
    std::size_t p = 0;
    for (std::size_t q = 0; q < n; ++q) gates.push_back({GateKind::H, {q}});
    auto rotation_layer = [&] {
        for (std::size_t q = 0; q < n; ++q) gates.push_back({GateKind::RY, {q}, p++});
        for (std::size_t q = 0; q < n; ++q) gates.push_back({GateKind::RZ, {q}, p++});
    };
    for (std::size_t r = 0; r < reps; ++r) {
        rotation_layer();
        for (std::size_t q = 0; q + 1 < n; ++q) gates.push_back({GateKind::CX, {q, q + 1}});
    }
    rotation_layer();
    return ParamCircuit(n, std::move(gates), p);
}

/// Applies the gate sequence to |0...0>.
inline StateVector evaluate(const ParamCircuit &c, std::span<const double> theta) {
    if (theta.size() != c.parameter_count()) {
        throw std::invalid_argument("evaluate: expected " + std::to_string(c.parameter_count()) +
                                    " parameters, got " + std::to_string(theta.size()));
    }
    StateVector s(c.n_qubits());
    for (std::size_t k = 0; k < c.gates().size(); ++k) c.apply_gate(s, k, theta);
    return s;
}

/**
 * Central differences on raw amplitudes: column j is
 * (psi(theta + eps e_j) - psi(theta - eps e_j)) / (2 eps).
 */
inline Eigen::MatrixXcd state_jacobian(const ParamCircuit &c, std::span<const double> theta,
                                       double eps = 1e-6) {
    if (!(eps > 0.0)) throw std::invalid_argument("state_jacobian: eps must be positive");
    if (theta.size() != c.parameter_count()) {
        throw std::invalid_argument("state_jacobian: parameter count mismatch");
    }
    const std::size_t dim = std::size_t{1} << c.n_qubits();
    const std::size_t P = c.parameter_count();
    Eigen::MatrixXcd jac(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(P));
    std::vector<double> shifted(theta.begin(), theta.end());

    auto store = [&](std::size_t j, const StateVector &plus, const StateVector &minus) {
        for (std::size_t i = 0; i < dim; ++i) {
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (plus[i] - minus[i]) / (2.0 * eps);
        }
    };

    if (!c.single_use()) {
        for (std::size_t j = 0; j < P; ++j) {
            shifted[j] = theta[j] + eps;
            const StateVector plus = evaluate(c, shifted);
            shifted[j] = theta[j] - eps;
            const StateVector minus = evaluate(c, shifted);
            shifted[j] = theta[j];
            store(j, plus, minus);
        }
        return jac;
    }

    // Each parameter drives one gate, so the state before that gate is shared
    // by both shifted evaluations, and by linearity the remaining gates can be
    // applied once to the difference of the two shifted gate outputs.
    const auto &gates = c.gates();
    StateVector prefix(c.n_qubits());
    std::size_t next_gate = 0;
    std::vector<std::size_t> order(P);
    for (std::size_t j = 0; j < P; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return c.gate_of_param(a) < c.gate_of_param(b); });
    for (std::size_t j : order) {
        const std::size_t g = c.gate_of_param(j);
        for (; next_gate < g; ++next_gate) c.apply_gate(prefix, next_gate, theta);
        StateVector plus = prefix;
        StateVector minus = prefix;
        shifted[j] = theta[j] + eps;
        c.apply_gate(plus, g, shifted);
        shifted[j] = theta[j] - eps;
        c.apply_gate(minus, g, shifted);
        shifted[j] = theta[j];
        for (std::size_t i = 0; i < dim; ++i) plus[i] -= minus[i];
        for (std::size_t k = g + 1; k < gates.size(); ++k) c.apply_gate(plus, k, theta);
        for (std::size_t i = 0; i < dim; ++i) {
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = plus[i] / (2.0 * eps);
        }
    }
    return jac;
}

// ---------------------------------------------------------------------------
// QAOA

/**
 * Alternating circuit U(b_p) U(g_p) ... U(b_1) U(g_1) |+>^N with
 * U(g) = exp(-i g H_prob) and U(b) = exp(-i b sum_i X_i).
 *
 * Diagonal H_prob is applied as an exact phase multiply. A non-diagonal
 * H_prob is rejected unless dense exponentiation is requested, in which case
 * exp(-i g H_prob) is applied through a cached eigendecomposition.
 */
class QaoaCircuit {
  public:
    enum class PhaseMode { DiagonalOnly, AllowDense };

    explicit QaoaCircuit(const PauliSum &h_prob, PhaseMode mode = PhaseMode::DiagonalOnly)
        : n_(h_prob.n_qubits()) {
        if (h_prob.is_diagonal()) {
            const auto d = CompiledOperator(h_prob).diagonal();
            diag_.resize(d.size());
            for (std::size_t i = 0; i < d.size(); ++i) diag_[i] = d[i].real();
            return;
        }
        if (mode == PhaseMode::DiagonalOnly) {
            throw std::invalid_argument("qaoa_state requires a diagonal problem Hamiltonian");
        }
        if (n_ > 12) throw std::invalid_argument("dense QAOA phase separator limited to 12 qubits");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(to_matrix(h_prob));
        if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
        eigenvalues_ = eig.eigenvalues();
        eigenvectors_ = eig.eigenvectors();
        dense_ = true;
    }

    [[nodiscard]] bool uses_dense_phase() const { return dense_; }
    [[nodiscard]] std::size_t n_qubits() const { return n_; }

    [[nodiscard]] StateVector state(std::span<const double> gammas, std::span<const double> betas) const {
        if (gammas.size() != betas.size()) {
            throw std::invalid_argument("qaoa_state: gamma and beta lengths differ");
        }
        StateVector s = plus_state(n_);
        for (std::size_t k = 0; k < gammas.size(); ++k) {
            apply_phase(s, gammas[k]);
            for (std::size_t q = 0; q < n_; ++q) apply_rx(s, q, 2.0 * betas[k]);
        }
        return s;
    }

    /// Packed parameters: first p gammas, then p betas.
    [[nodiscard]] StateVector state(std::span<const double> packed) const {
        if (packed.size() % 2 != 0) throw std::invalid_argument("QAOA parameter vector has odd length");
        const std::size_t p = packed.size() / 2;
        return state(packed.subspan(0, p), packed.subspan(p, p));
    }

  private:
    void apply_phase(StateVector &s, double gamma) const {
        if (!dense_) {
            for (std::size_t i = 0; i < s.dim(); ++i) s[i] *= std::polar(1.0, -gamma * diag_[i]);
            return;
        }
        Eigen::Map<Eigen::VectorXcd> v(s.data().data(), static_cast<Eigen::Index>(s.dim()));
        Eigen::VectorXcd coeffs = eigenvectors_.adjoint() * v;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::polar(1.0, -gamma * eigenvalues_(k));
        v = eigenvectors_ * coeffs;
    }

    std::size_t n_;
    std::vector<double> diag_;
    bool dense_ = false;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXcd eigenvectors_;
};

inline StateVector qaoa_state(const PauliSum &h_prob, std::span<const double> gammas,
                              std::span<const double> betas) {
    return QaoaCircuit(h_prob).state(gammas, betas);
}

} // namespace qbench
