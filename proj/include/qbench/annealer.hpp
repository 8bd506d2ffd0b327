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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "qbench/pauli.hpp"
#include "qbench/statevector.hpp"

namespace qbench {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Only the Z-type terms of h.
inline PauliSum diagonal_part(const PauliSum &h) {
    PauliSum out(h.n_qubits());
    for (const auto &t : h.terms()) {
        if (t.is_diagonal()) out.add(t);
    }
    return simplify(out);
}

struct SaConfig {
    std::size_t sweeps = 10000;
    std::size_t shots = 1000;
    std::uint64_t seed = 0;
    /// Both <= 0 selects the adaptive schedule.
    double t_hot = 0.0;
    double t_cold = 0.0;
};

struct SaResult {
    Counts counts;
    double success_fraction = 0.0;
    double best_energy = std::numeric_limits<double>::infinity();
    std::uint64_t best_bitstring = 0;
    double t_hot = 0.0;
    double t_cold = 0.0;
};

/// Energy landscape of a diagonal Pauli sum, with O(terms touching i) single-flip updates.
class IsingForm {
  public:
    explicit IsingForm(const PauliSum &h) : n_(h.n_qubits()), by_qubit_(h.n_qubits()) {
        if (!h.is_diagonal()) {
            throw std::invalid_argument("simulated annealing needs a diagonal Hamiltonian");
        }
        if (!h.has_real_coefficients()) throw std::invalid_argument("Hamiltonian has complex coefficients");
        for (const auto &t : h.terms()) {
            if (t.is_identity()) {
                offset_ += t.coefficient().real();
                continue;
            }
            const std::size_t k = masks_.size();
            masks_.push_back(t.z_mask());
            coeffs_.push_back(t.coefficient().real());
            for (std::size_t q = 0; q < n_; ++q) {
                if ((t.z_mask() >> q) & 1U) by_qubit_[q].push_back(k);
            }
        }
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_; }

    [[nodiscard]] double energy(std::uint64_t b) const {
        double e = offset_;
        for (std::size_t k = 0; k < masks_.size(); ++k) e += term_value(k, b);
        return e;
    }

    /// E(b with bit i flipped) - E(b).
    [[nodiscard]] double delta(std::uint64_t b, std::size_t i) const {
        double d = 0.0;
        for (const std::size_t k : by_qubit_[i]) d -= 2.0 * term_value(k, b);
        return d;
    }

  private:
    [[nodiscard]] double term_value(std::size_t k, std::uint64_t b) const {
        return (std::popcount(b & masks_[k]) & 1U) ? -coeffs_[k] : coeffs_[k];
    }

    std::size_t n_;
    double offset_ = 0.0;
    std::vector<std::uint64_t> masks_;
    std::vector<double> coeffs_;
    std::vector<std::vector<std::size_t>> by_qubit_;
};

/// (T_hot, T_cold) from 100 random single-flip probes.
inline std::pair<double, double> sa_temperatures(const IsingForm &f, std::uint64_t seed) {
    Rng rng(splitmix64(seed ^ 0x5a5a5a5aULL));
    const std::uint64_t mask = (std::uint64_t{1} << f.n_qubits()) - 1;
    std::uniform_int_distribution<std::size_t> pick(0, f.n_qubits() - 1);
    double hot = 0.0;
    double sum = 0.0;
    std::size_t nonzero = 0;
    for (int probe = 0; probe < 100; ++probe) {
        const std::uint64_t b = rng() & mask;
        const double d = std::abs(f.delta(b, pick(rng)));
        hot = std::max(hot, d);
        if (d > 0.0) {
            sum += d;
            ++nonzero;
        }
    }
    if (nonzero == 0) return {1.0, 1e-3};
    return {hot, 1e-3 * sum / static_cast<double>(nonzero)};
}

/**
 * Metropolis single-flip annealing, one independent chain per shot, geometric
 * cooling from T_hot to T_cold over the sweeps. A shot succeeds when its final
 * bitstring is in `optimal`.
 */
inline SaResult sa_solve(const PauliSum &h, const SaConfig &cfg, std::span<const std::uint64_t> optimal = {}) {
    if (cfg.sweeps < 1 || cfg.shots < 1) throw std::invalid_argument("sweeps and shots must be >= 1");
    const IsingForm form(h);
    const std::size_t n = form.n_qubits();
    SaResult out;
    if (cfg.t_hot > 0.0 || cfg.t_cold > 0.0) {
        out.t_hot = cfg.t_hot;
        out.t_cold = cfg.t_cold;
    } else {
        std::tie(out.t_hot, out.t_cold) = sa_temperatures(form, cfg.seed);
    }
    if (!(out.t_hot > out.t_cold && out.t_cold > 0.0)) {
        throw std::invalid_argument("temperatures must satisfy T_hot > T_cold > 0");
    }
    std::vector<double> beta(cfg.sweeps);
    const double ratio = out.t_cold / out.t_hot;
    for (std::size_t k = 0; k < cfg.sweeps; ++k) {
        const double frac = cfg.sweeps == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(cfg.sweeps - 1);
        beta[k] = 1.0 / (out.t_hot * std::pow(ratio, frac));
    }

    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    if (n > 20) throw std::invalid_argument("simulated annealing supports at most 20 variables");
    std::vector<double> table((mask + 1) * n);
    for (std::uint64_t b = 0; b <= mask; ++b) {
        for (std::size_t i = 0; i < n; ++i) table[b * n + i] = form.delta(b, i);
    }
    // Beyond 53 ln 2 only u = 0 could accept (probability 2^-53); treated as a rejection.
    constexpr double kNeverAccept = 36.7368005696771;
    std::size_t hits = 0;
    for (std::size_t shot = 0; shot < cfg.shots; ++shot) {
        Rng rng(splitmix64(cfg.seed + splitmix64(shot)));
        std::uint64_t b = rng() & mask;
        for (std::size_t k = 0; k < cfg.sweeps; ++k) {
            const double bk = beta[k];
            for (std::size_t i = 0; i < n; ++i) {
                const double d = table[b * n + i];
                bool flip = d <= 0.0;
                if (!flip && d * bk < kNeverAccept) {
                    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                    flip = u < std::exp(-d * bk);
                }
                if (flip) b ^= std::uint64_t{1} << i;
            }
        }
        ++out.counts[b];
        const double e = form.energy(b);
        if (e < out.best_energy) {
            out.best_energy = e;
            out.best_bitstring = b;
        }
        if (std::find(optimal.begin(), optimal.end(), b) != optimal.end()) ++hits;
    }
    out.success_fraction = static_cast<double>(hits) / static_cast<double>(cfg.shots);
    return out;
}

} // namespace qbench
