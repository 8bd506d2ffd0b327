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

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace qbench::linalg {

inline bool all_finite(const Eigen::VectorXd &v) { return v.allFinite(); }

/// Minimum-norm solution of a (P)SD system by SVD, discarding singular values
/// below rel_cutoff times the largest.
inline Eigen::VectorXd pinv_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &b,
                                  double rel_cutoff = 1e-10) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_cutoff * smax && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * b);
}

/**
 * Solves (a + lambda I) x = b for symmetric a. Uses an LDL^T factorization and
 * falls back to the SVD pseudo-inverse if that yields a non-finite or
 * inaccurate result. Throws if both fail.
 */
inline Eigen::VectorXd solve_regularized(const Eigen::MatrixXd &a, const Eigen::VectorXd &b,
                                         double lambda, double rel_cutoff = 1e-10) {
    if (a.rows() != a.cols() || a.rows() != b.size()) {
        throw std::invalid_argument("solve_regularized: dimension mismatch");
    }
    Eigen::MatrixXd reg = a;
    reg.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
    if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd x = ldlt.solve(b);
        const double scale = std::max(1.0, b.norm());
        if (x.allFinite() && (reg * x - b).norm() <= 1e-8 * scale) return x;
    }
    Eigen::VectorXd x = pinv_solve(reg, b, rel_cutoff);
    if (!x.allFinite()) throw std::runtime_error("regularized solve produced non-finite values");
    return x;
}

} // namespace qbench::linalg
