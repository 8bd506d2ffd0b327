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
 * Real- and imaginary-time integration of time-dependent Pauli-sum
 * Hamiltonians, the annealing schedule, and bond-dimension truncation.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbench/format.hpp"
#include "qbench/operator.hpp"
#include "qbench/pauli.hpp"
#include "qbench/problems.hpp"
#include "qbench/statevector.hpp"

namespace qbench {

/// H(t) = sum_k weight_k(t) * op_k.
class Schedule {
  public:
    struct Part {
        PauliSum op;
        std::function<double(double)> weight;
    };

    Schedule(double duration, std::vector<Part> parts, std::string tag)
        : duration_(duration), parts_(std::move(parts)), tag_(std::move(tag)) {
        if (!(duration_ > 0.0)) throw std::invalid_argument("schedule duration must be positive");
        if (parts_.empty()) throw std::invalid_argument("schedule needs at least one operator");
        for (const auto &p : parts_) {
            if (p.op.n_qubits() != parts_[0].op.n_qubits()) {
                throw std::invalid_argument("schedule operators act on different qubit counts");
            }
        }
    }

    [[nodiscard]] double duration() const { return duration_; }
    [[nodiscard]] const std::string &tag() const { return tag_; }
    [[nodiscard]] std::size_t n_qubits() const { return parts_[0].op.n_qubits(); }
    [[nodiscard]] const std::vector<Part> &parts() const { return parts_; }

    [[nodiscard]] PauliSum hamiltonian_at(double t) const {
        if (t < -1e-12 * duration_ || t > duration_ * (1.0 + 1e-12)) {
            throw std::out_of_range("schedule evaluated outside [0, T]");
        }
        PauliSum h(n_qubits());
        for (const auto &p : parts_) {
            const double w = p.weight(t);
            if (w != 0.0) h += p.op * w;
        }
        return simplify(h);
    }

  private:
    double duration_;
    std::vector<Part> parts_;
    std::string tag_;
};

inline Schedule constant_schedule(const PauliSum &h, double duration) {
    return Schedule(duration, {{h, [](double) { return 1.0; }}}, "constant");
}

/// (t/T) H_prob + (1 - t/T) H_d with H_d = -sum_i X_i.
inline Schedule qa_schedule(const PauliSum &h_prob, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("qa_schedule: T must be positive");
    const double T = duration;
    return Schedule(T,
                    {{driver_hamiltonian(h_prob.n_qubits()), [T](double t) { return 1.0 - t / T; }},
                     {h_prob, [T](double t) { return t / T; }}},
                    "qa");
}

/// Schedule with operators compiled for fast application.
class CompiledSchedule {
  public:
    explicit CompiledSchedule(const Schedule &s) : schedule_(&s) {
        for (const auto &p : s.parts()) {
            ops_.emplace_back(p.op);
            double id = 0.0;
            for (const auto &t : p.op.terms()) {
                if (t.is_identity()) id += t.coefficient().real();
            }
            identity_.push_back(id);
        }
    }

    /// out = scale * H(t) * in.
    void apply(double t, std::span<const cplx> in, std::span<cplx> out, cplx scale = 1.0) const {
        std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
        for (std::size_t k = 0; k < ops_.size(); ++k) {
            const double w = schedule_->parts()[k].weight(t);
            if (w != 0.0) ops_[k].apply_add(in, out, scale * w);
        }
    }

    [[nodiscard]] double energy(double t, std::span<const cplx> psi) const {
        cplx e{0.0, 0.0};
        double nrm = 0.0;
        for (const auto &a : psi) nrm += std::norm(a);
        for (std::size_t k = 0; k < ops_.size(); ++k) {
            const double w = schedule_->parts()[k].weight(t);
            if (w != 0.0) e += w * ops_[k].expectation(psi);
        }
        return e.real() / nrm;
    }

    /// tr H(t) / 2^N.
    [[nodiscard]] double mean_level(double t) const {
        double m = 0.0;
        for (std::size_t k = 0; k < ops_.size(); ++k) m += schedule_->parts()[k].weight(t) * identity_[k];
        return m;
    }

    [[nodiscard]] double norm_bound(double t) const {
        double b = 0.0;
        for (std::size_t k = 0; k < ops_.size(); ++k) {
            b += std::abs(schedule_->parts()[k].weight(t)) * ops_[k].norm_bound();
        }
        return b;
    }

    /// H(t) frozen at one time, usable wherever a CompiledOperator is.
    struct Slice {
        const CompiledSchedule *schedule;
        double t;
        void apply(std::span<const cplx> in, std::span<cplx> out, cplx scale = 1.0) const {
            schedule->apply(t, in, out, scale);
        }
        [[nodiscard]] double norm_bound() const { return schedule->norm_bound(t); }
        [[nodiscard]] double energy(std::span<const cplx> psi) const { return schedule->energy(t, psi); }
    };
    [[nodiscard]] Slice at(double t) const { return {this, t}; }

  private:
    const Schedule *schedule_;
    std::vector<CompiledOperator> ops_;
    std::vector<double> identity_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> energies;
    std::vector<double> fidelities;
    StateVector final_state{1};
    /// | ||psi(T)|| - 1 | before the final renormalization (real time only).
    double norm_drift = 0.0;
    /// Largest |<H> - tr H / 2^N| * dt seen over the run (imaginary time only).
    double max_energy_step = 0.0;
    /// Steps whose energy step exceeded the 0.1 smoothness threshold.
    std::size_t smoothness_warnings = 0;
    /// Total weight discarded by bond truncation.
    double discarded_weight = 0.0;
};

/// What to record while integrating.
struct ObserveOptions {
    const SubspaceProjector *truth = nullptr;
    /// Record every this many steps (0 selects max(1, steps / 1000)); the final step is always recorded.
    std::size_t every = 0;
};

inline void write_trajectory_csv(std::ostream &os, const Trajectory &tr) {
    os << "t,energy,fidelity\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        os << format_real(tr.times[k]) << ',' << format_real(tr.energies[k]) << ','
           << (tr.fidelities.empty() ? std::string("nan") : format_real(tr.fidelities[k])) << '\n';
    }
}

namespace detail {

inline std::size_t step_count(double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const double ratio = T / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(rounded));
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

inline std::size_t cadence(const ObserveOptions &obs, std::size_t steps) {
    return obs.every > 0 ? obs.every : std::max<std::size_t>(1, steps / 1000);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Bond-dimension truncation

struct TruncationResult {
    StateVector state;
    double discarded_weight;
};

/**
 * Left-to-right sweep over the cuts {0..k-1 | k..N-1}; at each cut the state,
 * viewed as a 2^k x 2^(N-k) matrix, is replaced by its best rank-chi
 * approximation. Cuts whose smaller side has dimension <= chi are untouched.
 */
inline TruncationResult truncate_bond_dimension(const StateVector &s, std::size_t chi) {
    if (chi < 1) throw std::invalid_argument("bond dimension must be at least 1");
    const std::size_t n = s.n_qubits();
    StateVector out = s;
    double discarded = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t rows = std::size_t{1} << k;
        const std::size_t cols = std::size_t{1} << (n - k);
        if (std::min(rows, cols) <= chi) continue;
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < out.dim(); ++i) {
            m(static_cast<Eigen::Index>(i & (rows - 1)), static_cast<Eigen::Index>(i >> k)) = out[i];
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd &sv = svd.singularValues();
        const auto keep = static_cast<Eigen::Index>(chi);
        for (Eigen::Index r = keep; r < sv.size(); ++r) discarded += sv(r) * sv(r);
        const Eigen::MatrixXcd approx = svd.matrixU().leftCols(keep) *
                                        sv.head(keep).cast<cplx>().asDiagonal() *
                                        svd.matrixV().leftCols(keep).adjoint();
        for (std::size_t i = 0; i < out.dim(); ++i) {
            out[i] = approx(static_cast<Eigen::Index>(i & (rows - 1)), static_cast<Eigen::Index>(i >> k));
        }
    }
    out.normalize();
    return {std::move(out), discarded};
}

// ---------------------------------------------------------------------------
// Real time

inline constexpr double kRealTimeNormTolerance = 1e-6;

/**
 * Classic RK4 on i d(psi)/dt = H(t) psi, with H evaluated at the stage times.
 * Throws if the norm drifts by more than 1e-6 over the run.
 */
inline Trajectory real_time_evolve(const Schedule &sched, const StateVector &s0, double dt,
                                   const ObserveOptions &obs = {}) {
    if (s0.n_qubits() != sched.n_qubits()) throw std::invalid_argument("state/schedule size mismatch");
    if (std::abs(s0.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state not normalized");
    const CompiledSchedule h(sched);
    const double T = sched.duration();
    const std::size_t steps = detail::step_count(T, dt);
    const std::size_t every = detail::cadence(obs, steps);
    const std::size_t dim = s0.dim();
    const cplx minus_i{0.0, -1.0};

    Trajectory tr;
    StateVector psi = s0;
    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.energies.push_back(h.energy(t, psi.amplitudes()));
        if (obs.truth) tr.fidelities.push_back(obs.truth->fidelity(psi));
    };
    record(0.0);

    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    double t = 0.0;
    for (std::size_t step = 0; step < steps; ++step) {
        const double hstep = step + 1 == steps ? T - t : dt;
        const auto &y = psi.data();
        h.apply(t, y, k1, minus_i);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * hstep * k1[i];
        h.apply(t + 0.5 * hstep, tmp, k2, minus_i);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * hstep * k2[i];
        h.apply(t + 0.5 * hstep, tmp, k3, minus_i);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + hstep * k3[i];
        h.apply(t + hstep, tmp, k4, minus_i);
        for (std::size_t i = 0; i < dim; ++i) {
            psi[i] += hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = step + 1 == steps ? T : t + hstep;
        if ((step + 1) % every == 0 || step + 1 == steps) {
            if (!psi.all_finite()) throw std::runtime_error("real-time evolution diverged");
            record(t);
        }
    }
    tr.norm_drift = std::abs(psi.norm() - 1.0);
    if (!(tr.norm_drift <= kRealTimeNormTolerance)) {
        throw std::runtime_error("real-time norm drift " + std::to_string(tr.norm_drift) +
                                 " exceeds 1e-6; reduce dt");
    }
    psi.normalize();
    tr.final_state = std::move(psi);
    return tr;
}

// ---------------------------------------------------------------------------
// Imaginary time

inline constexpr double kImagTimeGuard = 0.5;
inline constexpr double kImagTimeSmoothness = 0.1;

struct ImagTimeOptions {
    ObserveOptions observe{};
    /// Truncate to this bond dimension after every step (tensor-network mode).
    std::optional<std::size_t> bond_dimension{};
};

/**
 * RK4 on the norm-preserving flow d(psi)/dtau = -(H(tau) - <H>) psi, with an
 * explicit renormalization after each step. Throws when |E| dt exceeds 0.5,
 * with E = <H> - tr H / 2^N (the identity part of H cancels in this flow).
 */
inline Trajectory imag_time_evolve(const Schedule &sched, const StateVector &s0, double dt,
                                   const ImagTimeOptions &opts = {}) {
    if (s0.n_qubits() != sched.n_qubits()) throw std::invalid_argument("state/schedule size mismatch");
    if (std::abs(s0.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state not normalized");
    const CompiledSchedule h(sched);
    const double T = sched.duration();
    const std::size_t steps = detail::step_count(T, dt);
    const std::size_t every = detail::cadence(opts.observe, steps);
    const std::size_t dim = s0.dim();

    Trajectory tr;
    StateVector psi = s0;
    auto record = [&](double t, double e) {
        tr.times.push_back(t);
        tr.energies.push_back(e);
        if (opts.observe.truth) tr.fidelities.push_back(opts.observe.truth->fidelity(psi));
    };

    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    // k = -(H(t) - <H(t)>_y) y
    auto flow = [&](double t, std::span<const cplx> y, std::vector<cplx> &k) {
        const double e = h.energy(t, y);
        h.apply(t, y, k, -1.0);
        for (std::size_t i = 0; i < dim; ++i) k[i] += e * y[i];
    };

    if (opts.bond_dimension) {
        auto tr0 = truncate_bond_dimension(psi, *opts.bond_dimension);
        psi = std::move(tr0.state);
        tr.discarded_weight += tr0.discarded_weight;
    }
    record(0.0, h.energy(0.0, psi.amplitudes()));
    double t = 0.0;
    for (std::size_t step = 0; step < steps; ++step) {
        const double hstep = step + 1 == steps ? T - t : dt;
        const double e_now = h.energy(t, psi.amplitudes());
        const double energy_step = std::abs(e_now - h.mean_level(t)) * hstep;
        tr.max_energy_step = std::max(tr.max_energy_step, energy_step);
        if (energy_step > kImagTimeGuard) {
            throw std::runtime_error("imaginary-time step too large: |E| dt = " +
                                     std::to_string(energy_step) + " exceeds 0.5");
        }
        if (energy_step > kImagTimeSmoothness) ++tr.smoothness_warnings;

        const auto &y = psi.data();
        flow(t, y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * hstep * k1[i];
        flow(t + 0.5 * hstep, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * hstep * k2[i];
        flow(t + 0.5 * hstep, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + hstep * k3[i];
        flow(t + hstep, tmp, k4);
        for (std::size_t i = 0; i < dim; ++i) {
            psi[i] += hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (!psi.all_finite()) throw std::runtime_error("imaginary-time evolution produced non-finite amplitudes");
        psi.normalize();
        if (opts.bond_dimension) {
            auto trunc = truncate_bond_dimension(psi, *opts.bond_dimension);
            psi = std::move(trunc.state);
            tr.discarded_weight += trunc.discarded_weight;
        }
        t = step + 1 == steps ? T : t + hstep;
        if ((step + 1) % every == 0 || step + 1 == steps) record(t, h.energy(t, psi.amplitudes()));
    }
    tr.final_state = std::move(psi);
    return tr;
}

/// Constant-Hamiltonian convenience overload.
inline Trajectory imag_time_evolve(const PauliSum &h, const StateVector &s0, double dt, double T,
                                   const ImagTimeOptions &opts = {}) {
    return imag_time_evolve(constant_schedule(h, T), s0, dt, opts);
}

} // namespace qbench
