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
 * Pauli strings and weighted Pauli sums.
 *
 * Bit convention used throughout the library: basis index b has qubit i in
 * bit i (qubit 0 is the least-significant bit), and bit value 0 is the
 * +1 eigenstate of Z.
 */
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qbench/format.hpp"

namespace qbench {

using cplx = std::complex<double>;

/// Largest qubit count for which dense matrices may be materialized.
inline constexpr std::size_t kDenseQubitLimit = 14;

/// Terms whose coefficient magnitude falls below this are dropped by simplify().
inline constexpr double kTermDropThreshold = 1e-12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) {
    constexpr std::array<char, 4> letters{'I', 'X', 'Y', 'Z'};
    return letters[static_cast<std::size_t>(p)];
}

inline Pauli pauli_from_char(char c) {
    switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
        throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
    }
}

namespace detail {

// Single-qubit product a*b = phase * result. Phase is i^k with k in {0,1,2,3}.
struct LetterProduct {
    Pauli result;
    int phase_power;
};

inline LetterProduct multiply_letters(Pauli a, Pauli b) {
    if (a == Pauli::I) return {b, 0};
    if (b == Pauli::I) return {a, 0};
    if (a == b) return {Pauli::I, 0};
    const int ia = static_cast<int>(a);
    const int ib = static_cast<int>(b);
    // Cyclic order X->Y->Z->X gives +i, anti-cyclic gives -i.
    const int third = 6 - ia - ib;
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    return {static_cast<Pauli>(third), cyclic ? 1 : 3};
}

inline cplx i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace detail

/**
 * A tensor product of single-qubit Paulis with a complex coefficient.
 * letters[i] acts on qubit i.
 */
class PauliString {
  public:
    PauliString(std::size_t n_qubits, cplx coefficient = 1.0)
        : coefficient_(coefficient), letters_(n_qubits, Pauli::I) {
        if (n_qubits == 0) {
            throw std::invalid_argument("PauliString needs at least one qubit");
        }
    }

    PauliString(std::vector<Pauli> letters, cplx coefficient)
        : coefficient_(coefficient), letters_(std::move(letters)) {
        if (letters_.empty()) {
            throw std::invalid_argument("PauliString needs at least one qubit");
        }
    }

    /// Parses "XIZ" style text; character k is qubit k.
    static PauliString parse(std::string_view letters, cplx coefficient = 1.0) {
        std::vector<Pauli> out;
        out.reserve(letters.size());
        for (char c : letters) out.push_back(pauli_from_char(c));
        return PauliString(std::move(out), coefficient);
    }

    /// Single- or two-site operator on an otherwise identity string.
    static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p,
                              cplx coefficient = 1.0) {
        PauliString s(n_qubits, coefficient);
        s.set(qubit, p);
        return s;
    }

    static PauliString pair(std::size_t n_qubits, std::size_t qa, Pauli pa, std::size_t qb,
                            Pauli pb, cplx coefficient = 1.0) {
        PauliString s(n_qubits, coefficient);
        s.set(qa, pa);
        s.set(qb, pb);
        return s;
    }

    [[nodiscard]] std::size_t n_qubits() const { return letters_.size(); }
    [[nodiscard]] cplx coefficient() const { return coefficient_; }
    [[nodiscard]] const std::vector<Pauli> &letters() const { return letters_; }
    [[nodiscard]] Pauli operator[](std::size_t q) const { return letters_[q]; }

    void set(std::size_t qubit, Pauli p) {
        if (qubit >= letters_.size()) throw std::out_of_range("qubit index out of range");
        letters_[qubit] = p;
    }
    void set_coefficient(cplx c) { coefficient_ = c; }

    /// Bits set where the string flips (X or Y).
    [[nodiscard]] std::uint64_t x_mask() const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < letters_.size(); ++q) {
            if (letters_[q] == Pauli::X || letters_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
        }
        return m;
    }
    /// Bits set where the string applies a phase (Y or Z).
    [[nodiscard]] std::uint64_t z_mask() const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < letters_.size(); ++q) {
            if (letters_[q] == Pauli::Z || letters_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
        }
        return m;
    }
    [[nodiscard]] std::size_t y_count() const {
        return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), Pauli::Y));
    }
    [[nodiscard]] bool is_identity() const {
        return std::all_of(letters_.begin(), letters_.end(), [](Pauli p) { return p == Pauli::I; });
    }
    [[nodiscard]] bool is_diagonal() const {
        return std::all_of(letters_.begin(), letters_.end(),
                           [](Pauli p) { return p == Pauli::I || p == Pauli::Z; });
    }
    [[nodiscard]] std::size_t weight() const {
        return static_cast<std::size_t>(
            std::count_if(letters_.begin(), letters_.end(), [](Pauli p) { return p != Pauli::I; }));
    }

    [[nodiscard]] std::string letter_string() const {
        std::string s;
        s.reserve(letters_.size());
        for (Pauli p : letters_) s.push_back(to_char(p));
        return s;
    }

    friend bool operator==(const PauliString &a, const PauliString &b) = default;

  private:
    cplx coefficient_;
    std::vector<Pauli> letters_;
};

/// Letter-wise product with phase tracking.
inline PauliString mul(const PauliString &a, const PauliString &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("cannot multiply Pauli strings on " +
                                    std::to_string(a.n_qubits()) + " and " +
                                    std::to_string(b.n_qubits()) + " qubits");
    }
    std::vector<Pauli> out(a.n_qubits());
    int phase = 0;
    for (std::size_t q = 0; q < a.n_qubits(); ++q) {
        const auto lp = detail::multiply_letters(a[q], b[q]);
        out[q] = lp.result;
        phase += lp.phase_power;
    }
    return PauliString(std::move(out), a.coefficient() * b.coefficient() * detail::i_power(phase));
}

inline PauliString operator*(const PauliString &a, const PauliString &b) { return mul(a, b); }

/**
 * Weighted sum of Pauli strings over a fixed qubit count.
 *
 * Construction does not merge terms; call simplify() for the canonical form.
 */
class PauliSum {
  public:
    explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits == 0) throw std::invalid_argument("PauliSum needs at least one qubit");
    }
    PauliSum(std::size_t n_qubits, std::vector<PauliString> terms)
        : n_qubits_(n_qubits), terms_(std::move(terms)) {
        if (n_qubits == 0) throw std::invalid_argument("PauliSum needs at least one qubit");
        for (const auto &t : terms_) check(t);
    }

    static PauliSum identity(std::size_t n_qubits, cplx coefficient = 1.0) {
        return PauliSum(n_qubits, {PauliString(n_qubits, coefficient)});
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliString> &terms() const { return terms_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    void add(PauliString term) {
        check(term);
        terms_.push_back(std::move(term));
    }

    PauliSum &operator+=(const PauliSum &other) {
        if (other.n_qubits_ != n_qubits_) {
            throw std::invalid_argument("cannot add Pauli sums with different qubit counts");
        }
        terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
        return *this;
    }
    PauliSum &operator*=(cplx scale) {
        for (auto &t : terms_) t.set_coefficient(t.coefficient() * scale);
        return *this;
    }

    friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
    friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
    friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

    /// Distributes the product term by term (unsimplified).
    friend PauliSum operator*(const PauliSum &a, const PauliSum &b) {
        if (a.n_qubits_ != b.n_qubits_) {
            throw std::invalid_argument("cannot multiply Pauli sums with different qubit counts");
        }
        PauliSum out(a.n_qubits_);
        out.terms_.reserve(a.size() * b.size());
        for (const auto &ta : a.terms_) {
            for (const auto &tb : b.terms_) out.terms_.push_back(mul(ta, tb));
        }
        return out;
    }

    [[nodiscard]] bool is_diagonal() const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const PauliString &t) { return t.is_diagonal(); });
    }

    [[nodiscard]] bool has_real_coefficients(double tol = 1e-12) const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [tol](const PauliString &t) { return std::abs(t.coefficient().imag()) <= tol; });
    }

    /// Sum of coefficient magnitudes; an upper bound on the operator norm.
    [[nodiscard]] double one_norm() const {
        double s = 0.0;
        for (const auto &t : terms_) s += std::abs(t.coefficient());
        return s;
    }

    /// Largest coefficient magnitude among non-identity terms.
    [[nodiscard]] double max_nonidentity_coefficient() const {
        double m = 0.0;
        for (const auto &t : terms_) {
            if (!t.is_identity()) m = std::max(m, std::abs(t.coefficient()));
        }
        return m;
    }

  private:
    void check(const PauliString &t) const {
        if (t.n_qubits() != n_qubits_) {
            throw std::invalid_argument("term acts on " + std::to_string(t.n_qubits()) +
                                        " qubits, sum on " + std::to_string(n_qubits_));
        }
    }

    std::size_t n_qubits_;
    std::vector<PauliString> terms_;
};

/// Merges equal letter arrays, drops near-zero terms, sorts lexicographically by letters.
inline PauliSum simplify(const PauliSum &h) {
    std::vector<PauliString> sorted = h.terms();
    std::stable_sort(sorted.begin(), sorted.end(), [](const PauliString &a, const PauliString &b) {
        return a.letters() < b.letters();
    });
    std::vector<PauliString> merged;
    merged.reserve(sorted.size());
    for (auto &t : sorted) {
        if (!merged.empty() && merged.back().letters() == t.letters()) {
            merged.back().set_coefficient(merged.back().coefficient() + t.coefficient());
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const PauliString &t) {
        return std::abs(t.coefficient()) < kTermDropThreshold;
    });
    return PauliSum(h.n_qubits(), std::move(merged));
}

inline bool is_diagonal(const PauliSum &h) { return h.is_diagonal(); }

/**
 * Dense realization. Entry (r, c) is <r|h|c> in the library's basis ordering.
 */
inline Eigen::MatrixXcd to_matrix(const PauliSum &h) {
    const std::size_t n = h.n_qubits();
    if (n > kDenseQubitLimit) {
        throw std::invalid_argument("dense realization limited to " +
                                    std::to_string(kDenseQubitLimit) + " qubits, got " +
                                    std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto &t : h.terms()) {
        const std::uint64_t xm = t.x_mask();
        const std::uint64_t zm = t.z_mask();
        // Y = i X Z, so each Y contributes a factor i on top of the Z sign.
        const cplx base = t.coefficient() * detail::i_power(static_cast<int>(t.y_count()));
        for (std::size_t c = 0; c < dim; ++c) {
            const double sign = (std::popcount(c & zm) & 1U) ? -1.0 : 1.0;
            const std::size_t r = c ^ xm;
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += base * sign;
        }
    }
    return m;
}

/// One term per line: "<re>,<im> <letters>", letters ordered qubit 0 first.
inline std::string to_text(const PauliSum &h) {
    std::ostringstream os;
    for (const auto &t : h.terms()) {
        os << format_real(t.coefficient().real()) << ',' << format_real(t.coefficient().imag())
           << ' ' << t.letter_string() << '\n';
    }
    return os.str();
}

} // namespace qbench
