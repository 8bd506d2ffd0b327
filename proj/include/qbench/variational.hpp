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
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qbench/circuits.hpp"
#include "qbench/operator.hpp"
#include "qbench/optimizers.hpp"
#include "qbench/pauli.hpp"
#include "qbench/statevector.hpp"

namespace qbench {

enum class OptimizerKind { Spsa, Simplex };

inline std::string_view to_string(OptimizerKind k) {
    return k == OptimizerKind::Spsa ? "spsa" : "simplex";
}

struct VariationalConfig {
    std::size_t p = 100;     ///< QAOA depth
    std::size_t reps = 2;    ///< SU(2) ansatz repetitions
    /// Defaults to simplex for QAOA and SPSA for VQE.
    std::optional<OptimizerKind> optimizer{};
    std::size_t budget = 5000; ///< objective evaluations
    std::uint64_t seed = 0;
};

struct VariationalResult {
    OptResult opt;
    StateVector state{1};
    /// QAOA only: the phase separator needed a dense exponential.
    bool dense_phase = false;
};

namespace detail {

inline OptResult minimize(const Objective &f, std::vector<double> theta0, OptimizerKind kind,
                          std::size_t budget, Rng &rng) {
    if (budget < 1) throw std::invalid_argument("optimizer budget must be >= 1");
    if (kind == OptimizerKind::Simplex) {
        SimplexOptions opts;
        opts.max_evaluations = budget;
        return simplex_minimize(f, std::move(theta0), opts);
    }
    SpsaOptions opts;
    opts.max_iterations = std::max<std::size_t>(1, (budget - 2) / 2);
    opts.max_evaluations = budget;
    return spsa_minimize(f, std::move(theta0), opts, rng);
}

} // namespace detail

/// Linear ramp gamma_k = 0.5 k / p, beta_k = 0.5 (1 - k / p), packed gammas first.
inline std::vector<double> qaoa_initial_parameters(std::size_t p) {
    std::vector<double> x(2 * p);
    for (std::size_t k = 1; k <= p; ++k) {
        const double r = static_cast<double>(k) / static_cast<double>(p);
        x[k - 1] = 0.5 * r;
        x[p + k - 1] = 0.5 * (1.0 - r);
    }
    return x;
}

/// theta = 0 plus a uniform perturbation in [-1e-2, 1e-2].
inline std::vector<double> vqe_initial_parameters(std::size_t count, Rng &rng) {
    std::uniform_real_distribution<double> jitter(-1e-2, 1e-2);
    std::vector<double> x(count);
    for (auto &v : x) v = jitter(rng);
    return x;
}

/// Minimizes <gamma, beta| H |gamma, beta>. Non-diagonal H uses the dense phase separator.
inline VariationalResult run_qaoa(const PauliSum &h, const VariationalConfig &cfg) {
    if (cfg.budget < 1) throw std::invalid_argument("run_qaoa: budget must be >= 1");
    const QaoaCircuit circuit(h, QaoaCircuit::PhaseMode::AllowDense);
    const CompiledOperator op(h);
    const Objective objective = [&](std::span<const double> x) {
        return op.expectation(circuit.state(x).amplitudes()).real();
    };
    Rng rng(cfg.seed);
    VariationalResult out;
    out.dense_phase = circuit.uses_dense_phase();
    const OptimizerKind kind = cfg.optimizer.value_or(OptimizerKind::Simplex);
    const std::size_t budget = cfg.p == 0 ? 1 : cfg.budget;
    out.opt = detail::minimize(objective, qaoa_initial_parameters(cfg.p), kind, budget, rng);
    out.state = circuit.state(out.opt.best_theta);
    return out;
}

/// Minimizes <psi(theta)| H |psi(theta)> over the SU(2) ansatz.
inline VariationalResult run_vqe(const PauliSum &h, const VariationalConfig &cfg) {
    if (cfg.budget < 1) throw std::invalid_argument("run_vqe: budget must be >= 1");
    const ParamCircuit circuit = su2_ansatz(h.n_qubits(), cfg.reps);
    const CompiledOperator op(h);
    const Objective objective = [&](std::span<const double> x) {
        return op.expectation(evaluate(circuit, x).amplitudes()).real();
    };
    Rng rng(cfg.seed);
    std::vector<double> theta0 = vqe_initial_parameters(circuit.parameter_count(), rng);
    VariationalResult out;
    out.opt = detail::minimize(objective, std::move(theta0),
                               cfg.optimizer.value_or(OptimizerKind::Spsa), cfg.budget, rng);
    out.state = evaluate(circuit, out.opt.best_theta);
    return out;
}

} // namespace qbench
