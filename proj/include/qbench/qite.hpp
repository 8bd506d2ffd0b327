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
 * Quantum imaginary-time evolution, ansatz-based (McLachlan projection onto
 * circuit parameters) and ansatz-free (per-step fitted unitaries), with either
 * a constant Hamiltonian (QITE) or the annealing schedule (ITQA).
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbench/circuits.hpp"
#include "qbench/dynamics.hpp"
#include "qbench/format.hpp"
#include "qbench/linalg.hpp"
#include "qbench/operator.hpp"
#include "qbench/pauli.hpp"
#include "qbench/statevector.hpp"
#include "qbench/variational.hpp"

namespace qbench {

enum class QiteMode { AnsatzBased, AnsatzFree };
enum class ScheduleKind { Constant, Qa };

inline std::string_view to_string(QiteMode m) {
    return m == QiteMode::AnsatzBased ? "ansatz_based" : "ansatz_free";
}
inline std::string_view to_string(ScheduleKind k) { return k == ScheduleKind::Constant ? "constant" : "qa"; }

inline constexpr double kDefaultRegularization = 1e-6;

/// Unit-coefficient, non-identity Pauli strings used to fit ansatz-free steps.
class PauliBasis {
  public:
    PauliBasis(std::size_t n_qubits, std::vector<PauliString> strings)
        : n_(n_qubits), strings_(std::move(strings)) {
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        for (const auto &s : strings_) {
            if (s.n_qubits() != n_) throw std::invalid_argument("basis string has wrong qubit count");
            if (s.is_identity()) throw std::invalid_argument("basis must not contain the identity");
            if (s.coefficient() != cplx{1.0, 0.0}) {
                throw std::invalid_argument("basis strings must have unit coefficient");
            }
            if (!seen.emplace(s.x_mask(), s.z_mask()).second) {
                throw std::invalid_argument("duplicate basis string " + s.letter_string());
            }
        }
        const std::size_t full = (std::size_t{1} << (2 * n_)) - 1;
        complete_ = strings_.size() == full;
    }

    /// All 4^n - 1 non-identity strings.
    static PauliBasis full(std::size_t n) { return local(n, n); }

    /// All non-identity strings of weight <= k.
    static PauliBasis local(std::size_t n, std::size_t k) {
        if (n < 1 || n > 7) throw std::invalid_argument("Pauli basis supports 1..7 qubits");
        std::vector<PauliString> out;
        const std::size_t count = std::size_t{1} << (2 * n);
        for (std::size_t code = 1; code < count; ++code) {
            std::vector<Pauli> letters(n);
            for (std::size_t q = 0; q < n; ++q) letters[q] = static_cast<Pauli>((code >> (2 * q)) & 3U);
            PauliString s(std::move(letters), 1.0);
            if (s.weight() <= k) out.push_back(std::move(s));
        }
        return PauliBasis(n, std::move(out));
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_; }
    [[nodiscard]] std::size_t size() const { return strings_.size(); }
    [[nodiscard]] bool complete() const { return complete_; }
    [[nodiscard]] const std::vector<PauliString> &strings() const { return strings_; }

  private:
    std::size_t n_;
    std::vector<PauliString> strings_;
    bool complete_ = false;
};

// ---------------------------------------------------------------------------
// Ansatz-based

struct McLachlanUpdate {
    Eigen::VectorXd theta_dot;
    /// ||(M + lambda I) theta_dot + C||.
    double residual = 0.0;
};

/// theta_dot from (M + lambda I) theta_dot = -C with M_jk = Re<dj|dk>, C_j = Re<dj|H|psi>.
template <typename Op>
McLachlanUpdate mclachlan_derivative(const ParamCircuit &c, std::span<const double> theta,
                                     const Op &h_now, double lambda = kDefaultRegularization,
                                     double eps = 1e-6) {
    if (theta.size() != c.parameter_count()) throw std::invalid_argument("mclachlan: parameter count mismatch");
    const StateVector psi = evaluate(c, theta);
    const Eigen::MatrixXcd J = state_jacobian(c, theta, eps);
    std::vector<cplx> hpsi(psi.dim());
    h_now.apply(psi.data(), hpsi, 1.0);
    // Re<a|b> = Re(a)^T Re(b) + Im(a)^T Im(b): work with the stacked real form.
    const Eigen::Index d = J.rows();
    Eigen::MatrixXd Jr(2 * d, J.cols());
    Jr.topRows(d) = J.real();
    Jr.bottomRows(d) = J.imag();
    Eigen::VectorXd hr(2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        hr(i) = hpsi[static_cast<std::size_t>(i)].real();
        hr(d + i) = hpsi[static_cast<std::size_t>(i)].imag();
    }
    const Eigen::MatrixXd M = Jr.transpose() * Jr;
    const Eigen::VectorXd C = Jr.transpose() * hr;
    McLachlanUpdate out;
    out.theta_dot = linalg::solve_regularized(M, -C, lambda);
    Eigen::MatrixXd reg = M;
    reg.diagonal().array() += lambda;
    out.residual = (reg * out.theta_dot + C).norm();
    return out;
}

/// One explicit-Euler McLachlan step.
inline std::vector<double> mclachlan_step(const ParamCircuit &c, std::span<const double> theta,
                                          const PauliSum &h_now, double dt,
                                          double lambda = kDefaultRegularization) {
    const auto upd = mclachlan_derivative(c, theta, CompiledOperator(h_now), lambda);
    std::vector<double> next(theta.begin(), theta.end());
    for (std::size_t j = 0; j < next.size(); ++j) next[j] += dt * upd.theta_dot(static_cast<Eigen::Index>(j));
    return next;
}

// ---------------------------------------------------------------------------
// Ansatz-free

namespace detail {

/// Normalized e^{-dt H} psi.
template <typename Op>
StateVector imag_target(const Op &h, const StateVector &psi, double dt) {
    return expm_multiply(h, psi, cplx{-dt, 0.0}, true);
}

/// Normal equations over an arbitrary basis: (S + S^T + lambda I) a = b.
inline Eigen::VectorXd fit_coefficients(const StateVector &psi, const std::vector<cplx> &delta,
                                        const PauliBasis &basis, double lambda) {
    const auto K = static_cast<Eigen::Index>(basis.size());
    const auto d = static_cast<Eigen::Index>(psi.dim());
    Eigen::MatrixXcd V(d, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const StateVector v = apply_pauli(psi, basis.strings()[static_cast<std::size_t>(k)]);
        for (Eigen::Index i = 0; i < d; ++i) V(i, k) = v[static_cast<std::size_t>(i)];
    }
    const Eigen::Map<const Eigen::VectorXcd> dv(delta.data(), d);
    const Eigen::MatrixXd S = (V.adjoint() * V).real();
    // b_I = 2 Im<delta|sigma_I|psi>
    const Eigen::VectorXd b = 2.0 * (dv.adjoint() * V).transpose().imag();
    return linalg::solve_regularized(S + S.transpose(), b, lambda);
}

/// exp(-i dt A) for a 2x2 Hermitian A, acting on (1, 0).
inline std::pair<cplx, cplx> expi_2x2_first_column(double p, cplx q, double r, double dt) {
    const double m = 0.5 * (p + r);
    const double delta = 0.5 * (p - r);
    const double w = std::sqrt(delta * delta + std::norm(q));
    const cplx phase = std::exp(cplx{0.0, -dt * m});
    const double cw = std::cos(w * dt);
    const double sinc = w > 0.0 ? std::sin(w * dt) / w : dt;
    const cplx minus_i{0.0, -1.0};
    return {phase * (cw + minus_i * sinc * delta), phase * (minus_i * sinc * std::conj(q))};
}

} // namespace detail

/**
 * Ansatz-free step over an arbitrary basis: fits a to the imaginary-time
 * increment and applies exp(-i dt sum_I a_I sigma_I) directly.
 */
template <typename Op>
StateVector ansatz_free_step_generic(const StateVector &psi, const Op &h_now, double dt,
                                     const PauliBasis &basis, double lambda = kDefaultRegularization) {
    const StateVector target = detail::imag_target(h_now, psi, dt);
    std::vector<cplx> delta(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) delta[i] = (target[i] - psi[i]) / dt;
    const Eigen::VectorXd a = detail::fit_coefficients(psi, delta, basis, lambda);
    PauliSum A(psi.n_qubits());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        PauliString s = basis.strings()[k];
        s.set_coefficient(a(static_cast<Eigen::Index>(k)));
        A.add(s);
    }
    StateVector out = expm_multiply(CompiledOperator(A), psi, cplx{0.0, -dt});
    out.normalize();
    return out;
}

/**
 * Ansatz-free step over the complete basis, solved in closed form.
 *
 * For the complete set, sum_I sigma_I |u><v| sigma_I = d <v|u> - |u><v|, so the
 * fitted operator is d H_y - Im(alpha) with H_y = (-i/2)(|y><psi| - |psi><y|)
 * and it acts only on span{psi, y}. Equal to the generic fit on the same basis.
 */
template <typename Op>
StateVector ansatz_free_step_complete(const StateVector &psi, const Op &h_now, double dt,
                                      double lambda = kDefaultRegularization) {
    const StateVector target = detail::imag_target(h_now, psi, dt);
    const std::size_t n = psi.dim();
    const double d = static_cast<double>(n);
    const double mu = 0.5 * lambda;
    // t = -delta; tau = <psi|t>
    std::vector<cplx> t(n);
    cplx tau{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = -(target[i] - psi[i]) / dt;
        tau += std::conj(psi[i]) * t[i];
    }
    double beta2 = 0.0;
    const double scale = 1.0 / (0.5 * d + mu);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = (t[i] - psi[i] * tau) * scale;
        beta2 += std::norm(t[i]);
    }
    const double im_alpha = tau.imag() / (d - 1.0 + mu);
    const double beta = std::sqrt(beta2);
    StateVector out = psi;
    if (!(beta > 0.0)) {
        // A psi = (d - 1) Im(alpha) psi: a global phase.
        out.normalize();
        return out;
    }
    // A restricted to {psi, e}: d [[Im a, i b/2], [-i b/2, 0]] - Im a.
    const double p = (d - 1.0) * im_alpha;
    const cplx q{0.0, 0.5 * d * beta};
    const double r = -im_alpha;
    const auto [u0, u1] = detail::expi_2x2_first_column(p, q, r, dt);
    for (std::size_t i = 0; i < n; ++i) out[i] = u0 * psi[i] + u1 * (t[i] / beta);
    if (!out.all_finite()) throw std::runtime_error("ansatz-free step produced non-finite amplitudes");
    out.normalize();
    return out;
}

/// Picks the closed form when the basis is complete.
template <typename Op>
StateVector ansatz_free_step(const StateVector &psi, const Op &h_now, double dt, const PauliBasis &basis,
                             double lambda = kDefaultRegularization) {
    if (std::abs(psi.norm() - 1.0) > 1e-8) throw std::invalid_argument("ansatz_free_step: state not normalized");
    if (basis.n_qubits() != psi.n_qubits()) throw std::invalid_argument("basis/state size mismatch");
    return basis.complete() ? ansatz_free_step_complete(psi, h_now, dt, lambda)
                            : ansatz_free_step_generic(psi, h_now, dt, basis, lambda);
}

inline StateVector ansatz_free_step(const StateVector &psi, const PauliSum &h_now, double dt,
                                    const PauliBasis &basis, double lambda = kDefaultRegularization) {
    return ansatz_free_step(psi, CompiledOperator(h_now), dt, basis, lambda);
}

// ---------------------------------------------------------------------------
// Drivers

struct QiteConfig {
    QiteMode mode = QiteMode::AnsatzFree;
    ScheduleKind schedule = ScheduleKind::Constant;
    double dt = 0.1;
    double T = 1000.0;
    double lambda = kDefaultRegularization;
    /// Ansatz-free; defaults to the complete basis.
    std::optional<PauliBasis> basis{};
    /// Ansatz-based; defaults to su2_ansatz(n, reps).
    std::optional<ParamCircuit> circuit{};
    std::size_t reps = 2;
    std::uint64_t seed = 0;
    /// Record every this many steps (0 selects max(1, steps / 1000)).
    std::size_t every = 0;
};

struct QiteRun {
    Trajectory trajectory;
    std::size_t steps = 0;
    std::size_t basis_size = 0;
    std::size_t parameter_count = 0;
    std::vector<double> theta;
    /// Largest McLachlan solve residual seen.
    double max_residual = 0.0;
};

inline std::size_t validated_steps(double T, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(T >= dt) || !std::isfinite(T)) throw std::invalid_argument("T must be at least dt");
    const double ratio = T / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument("T / dt must be an integer");
    }
    return static_cast<std::size_t>(std::round(ratio));
}

inline Schedule make_schedule(const PauliSum &h_prob, ScheduleKind kind, double T) {
    return kind == ScheduleKind::Constant ? constant_schedule(h_prob, T) : qa_schedule(h_prob, T);
}

/// Ansatz-free evolution of s0 under a schedule.
inline QiteRun ansatz_free_evolve(const Schedule &sched, const StateVector &s0, double dt,
                                  const PauliBasis &basis, double lambda = kDefaultRegularization,
                                  const ObserveOptions &obs = {}) {
    const std::size_t steps = validated_steps(sched.duration(), dt);
    const std::size_t every = detail::cadence(obs, steps);
    const CompiledSchedule h(sched);
    QiteRun run;
    run.steps = steps;
    run.basis_size = basis.size();
    StateVector psi = s0;
    auto record = [&](double t) {
        run.trajectory.times.push_back(t);
        run.trajectory.energies.push_back(h.energy(t, psi.amplitudes()));
        if (obs.truth) run.trajectory.fidelities.push_back(obs.truth->fidelity(psi));
    };
    record(0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        psi = ansatz_free_step(psi, h.at(static_cast<double>(k) * dt), dt, basis, lambda);
        if ((k + 1) % every == 0 || k + 1 == steps) record(static_cast<double>(k + 1) * dt);
    }
    run.trajectory.final_state = std::move(psi);
    return run;
}

/// McLachlan evolution of c(theta0) under a schedule.
inline QiteRun mclachlan_evolve(const Schedule &sched, const ParamCircuit &c, std::vector<double> theta0,
                                double dt, double lambda = kDefaultRegularization,
                                const ObserveOptions &obs = {}) {
    const std::size_t steps = validated_steps(sched.duration(), dt);
    const std::size_t every = detail::cadence(obs, steps);
    const CompiledSchedule h(sched);
    QiteRun run;
    run.steps = steps;
    run.parameter_count = c.parameter_count();
    std::vector<double> theta = std::move(theta0);
    auto record = [&](double t) {
        const StateVector psi = evaluate(c, theta);
        run.trajectory.times.push_back(t);
        run.trajectory.energies.push_back(h.energy(t, psi.amplitudes()));
        if (obs.truth) run.trajectory.fidelities.push_back(obs.truth->fidelity(psi));
    };
    record(0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto upd = mclachlan_derivative(c, theta, h.at(static_cast<double>(k) * dt), lambda);
        run.max_residual = std::max(run.max_residual, upd.residual);
        for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += dt * upd.theta_dot(static_cast<Eigen::Index>(j));
        if ((k + 1) % every == 0 || k + 1 == steps) record(static_cast<double>(k + 1) * dt);
    }
    run.trajectory.final_state = evaluate(c, theta);
    run.theta = std::move(theta);
    return run;
}

/// QITE or ITQA on h_prob from |+...+> (ansatz-based: theta near 0).
inline QiteRun run_qite(const PauliSum &h_prob, const QiteConfig &cfg, const SubspaceProjector *truth = nullptr) {
    const std::size_t n = h_prob.n_qubits();
    const Schedule sched = make_schedule(h_prob, cfg.schedule, cfg.T);
    const ObserveOptions obs{truth, cfg.every};
    if (cfg.mode == QiteMode::AnsatzFree) {
        const PauliBasis basis = cfg.basis ? *cfg.basis : PauliBasis::full(n);
        return ansatz_free_evolve(sched, plus_state(n), cfg.dt, basis, cfg.lambda, obs);
    }
    const ParamCircuit circuit = cfg.circuit ? *cfg.circuit : su2_ansatz(n, cfg.reps);
    if (circuit.n_qubits() != n) throw std::invalid_argument("circuit/Hamiltonian size mismatch");
    Rng rng(cfg.seed);
    return mclachlan_evolve(sched, circuit, vqe_initial_parameters(circuit.parameter_count(), rng), cfg.dt,
                            cfg.lambda, obs);
}

/// One-line JSON metadata for a run.
inline void write_qite_metadata(std::ostream &os, const QiteConfig &cfg, const QiteRun &run) {
    os << "{\"mode\":\"" << to_string(cfg.mode) << "\",\"schedule\":\"" << to_string(cfg.schedule)
       << "\",\"dt\":" << format_real(cfg.dt) << ",\"T\":" << format_real(cfg.T)
       << ",\"lambda\":" << format_real(cfg.lambda) << ",\"basis_size\":" << run.basis_size
       << ",\"parameter_count\":" << run.parameter_count << ",\"steps\":" << run.steps << "}\n";
}

} // namespace qbench
