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
#include <map>
#include <stdexcept>
#include <vector>

#include "qbench/pauli.hpp"
#include "qbench/statevector.hpp"

namespace qbench {

/**
 * A PauliSum precompiled for repeated application to states.
 *
 * Terms sharing a flip mask are folded into one coefficient vector, so
 * h|psi> costs (number of distinct flip masks) * 2^N operations.
 */
class CompiledOperator {
  public:
    CompiledOperator() = default;

    explicit CompiledOperator(const PauliSum &h) : n_(h.n_qubits()), dim_(std::size_t{1} << n_) {
        if (n_ > kDenseQubitLimit) {
            throw std::invalid_argument("operator too large for state-vector simulation");
        }
        std::map<std::uint64_t, std::size_t> index;
        for (const auto &t : h.terms()) {
            const std::uint64_t xm = t.x_mask();
            const std::uint64_t zm = t.z_mask();
            auto [it, inserted] = index.try_emplace(xm, blocks_.size());
            if (inserted) blocks_.push_back({xm, std::vector<cplx>(dim_, cplx{0.0, 0.0})});
            auto &diag = blocks_[it->second].coeffs;
            const cplx base = t.coefficient() * detail::i_power(static_cast<int>(t.y_count()));
            for (std::size_t i = 0; i < dim_; ++i) {
                diag[i] += (std::popcount(i & zm) & 1U) ? -base : base;
            }
            norm_bound_ += std::abs(t.coefficient());
        }
        diagonal_ = std::all_of(blocks_.begin(), blocks_.end(),
                                [](const Block &b) { return b.flip == 0; });
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] bool is_diagonal() const { return diagonal_; }
    /// Sum of |coefficients|, an upper bound on the spectral radius.
    [[nodiscard]] double norm_bound() const { return norm_bound_; }

    /// Diagonal of the operator in the computational basis.
    [[nodiscard]] std::vector<cplx> diagonal() const {
        std::vector<cplx> d(dim_, cplx{0.0, 0.0});
        for (const auto &b : blocks_) {
            if (b.flip == 0) d = b.coeffs;
        }
        return d;
    }

    /// out = scale * h * in (out is overwritten; must not alias in).
    void apply(std::span<const cplx> in, std::span<cplx> out, cplx scale = 1.0) const {
        std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
        apply_add(in, out, scale);
    }

    /// out += scale * h * in.
    void apply_add(std::span<const cplx> in, std::span<cplx> out, cplx scale = 1.0) const {
        for (const auto &b : blocks_) {
            const cplx *c = b.coeffs.data();
            if (b.flip == 0) {
                for (std::size_t i = 0; i < dim_; ++i) out[i] += scale * c[i] * in[i];
            } else {
                for (std::size_t i = 0; i < dim_; ++i) out[i ^ b.flip] += scale * c[i] * in[i];
            }
        }
    }

    [[nodiscard]] StateVector apply(const StateVector &s) const {
        check(s);
        StateVector out(s.n_qubits());
        apply(s.amplitudes(), out.amplitudes());
        return out;
    }

    /// <psi|h|psi> without normalization.
    [[nodiscard]] cplx expectation(std::span<const cplx> psi) const {
        cplx acc{0.0, 0.0};
        for (const auto &b : blocks_) {
            const cplx *c = b.coeffs.data();
            for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(psi[i ^ b.flip]) * c[i] * psi[i];
        }
        return acc;
    }

    [[nodiscard]] double expectation(const StateVector &s) const {
        check(s);
        return expectation(s.amplitudes()).real();
    }

  private:
    struct Block {
        std::uint64_t flip;
        std::vector<cplx> coeffs;
    };

    void check(const StateVector &s) const {
        if (s.n_qubits() != n_) throw std::invalid_argument("operator/state size mismatch");
    }

    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<Block> blocks_;
    double norm_bound_ = 0.0;
    bool diagonal_ = true;
};

/**
 * exp(t * h) |psi> by a truncated Taylor series over substeps small enough
 * that |t| * ||h|| <= 1/2 per substep. With renormalize set (the imaginary-time
 * use) the state is renormalized after every substep, keeping magnitudes bounded.
 *
 * Op needs apply(in, out, scale) and norm_bound().
 */
template <typename Op>
StateVector expm_multiply(const Op &h, const StateVector &psi, cplx t, bool renormalize = false) {
    const double reach = std::abs(t) * h.norm_bound();
    const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(reach / 0.5)));
    const cplx dt = t / static_cast<double>(substeps);
    StateVector cur = psi;
    std::vector<cplx> term(cur.dim());
    std::vector<cplx> next(cur.dim());
    for (std::size_t s = 0; s < substeps; ++s) {
        std::copy(cur.data().begin(), cur.data().end(), term.begin());
        const double base = std::max(1.0, cur.norm_squared());
        for (int k = 1; k < 64; ++k) {
            h.apply(term, next, dt / static_cast<double>(k));
            double term_norm = 0.0;
            for (std::size_t i = 0; i < cur.dim(); ++i) {
                cur[i] += next[i];
                term_norm += std::norm(next[i]);
            }
            term.swap(next);
            if (term_norm < 1e-34 * base) break;
        }
        if (renormalize) cur.normalize();
    }
    if (!cur.all_finite()) throw std::runtime_error("expm_multiply produced non-finite amplitudes");
    return cur;
}

} // namespace qbench
