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


// Conversions between library types and the dense reference representation.

#pragma once

#include "oracles.hpp"
#include "qbench/pauli.hpp"
#include "qbench/statevector.hpp"

namespace support {

inline oracle::Mat dense(const qbench::PauliSum &h) {
    const auto dim = Eigen::Index{1} << h.n_qubits();
    oracle::Mat m = oracle::Mat::Zero(dim, dim);
    for (const auto &t : h.terms()) m += oracle::pauli_matrix(t.letter_string(), t.coefficient());
    return m;
}

inline oracle::Vec vec(const qbench::StateVector &s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

inline qbench::StateVector state(std::size_t n, const oracle::Vec &v) {
    std::vector<qbench::cplx> a(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) a[static_cast<std::size_t>(i)] = v(i);
    return qbench::StateVector(n, std::move(a));
}

/// Z-only PauliSum reproducing the given real diagonal matrix.
inline qbench::PauliSum diagonal_sum(const oracle::Mat &diag_h, std::size_t n) {
    qbench::PauliSum h(n);
    for (const auto &[letters, c] : oracle::z_expansion(diag_h, n)) {
        if (std::abs(c) > 1e-15) h.add(qbench::PauliString::parse(letters, c));
    }
    return h;
}

} // namespace support
