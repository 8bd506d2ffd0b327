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
 * The four benchmark problem families: instance generation, Hamiltonians,
 * and exact ground-truth oracles.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qbench/pauli.hpp"
#include "qbench/statevector.hpp"

namespace qbench {

enum class ProblemKind { MaxCut, NumberPartition, Knapsack, SpinGlass };

inline constexpr std::array<ProblemKind, 4> kAllProblemKinds{
    ProblemKind::MaxCut, ProblemKind::NumberPartition, ProblemKind::Knapsack,
    ProblemKind::SpinGlass};

inline std::string_view to_string(ProblemKind k) {
    switch (k) {
    case ProblemKind::MaxCut: return "maxcut";
    case ProblemKind::NumberPartition: return "numpart";
    case ProblemKind::Knapsack: return "knapsack";
    case ProblemKind::SpinGlass: return "spinglass";
    }
    return "unknown";
}

inline std::optional<ProblemKind> parse_problem_kind(std::string_view s) {
    for (ProblemKind k : kAllProblemKinds) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

inline constexpr std::string_view kValidKindsText = "maxcut, numpart, knapsack, spinglass";

struct Edge {
    std::size_t u;
    std::size_t v;
    friend bool operator==(const Edge &, const Edge &) = default;
};

struct MaxCutData {
    std::vector<Edge> edges;
    double edge_probability = 0.5;
};

struct NumberPartitionData {
    std::vector<std::int64_t> numbers;
};

struct KnapsackData {
    std::vector<std::int64_t> weights;
    std::vector<std::int64_t> values;
    std::int64_t capacity = 0;
    double penalty = 0.0;
};

/// Couplings J^x, J^y, J^z on an unordered pair i < j.
struct Coupling {
    std::size_t i;
    std::size_t j;
    double jx;
    double jy;
    double jz;
};

struct SpinGlassData {
    std::vector<Coupling> couplings;
    double mu = 0.0;
    double sigma = 0.3;
};

struct ProblemInstance {
    ProblemKind kind;
    std::size_t n;
    std::uint64_t seed;
    std::variant<MaxCutData, NumberPartitionData, KnapsackData, SpinGlassData> payload;

    [[nodiscard]] std::string id() const {
        return std::string(to_string(kind)) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
    }
    [[nodiscard]] bool is_classical() const { return kind != ProblemKind::SpinGlass; }

    template <typename T> [[nodiscard]] const T &as() const { return std::get<T>(payload); }
};

/// Ground energy, degeneracy and an orthonormal basis of the ground subspace.
struct GroundTruth {
    double energy = 0.0;
    std::size_t degeneracy = 0;
    std::vector<StateVector> subspace;
    /// Optimal basis indices (classical problems only).
    std::vector<std::uint64_t> optimal_bitstrings;
};

// ---------------------------------------------------------------------------
// Validation and construction

inline void validate(const ProblemInstance &p) {
    if (p.n < 1) throw std::invalid_argument("instance needs at least one variable");
    std::visit(
        [&](const auto &d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, MaxCutData>) {
                for (std::size_t a = 0; a < d.edges.size(); ++a) {
                    const Edge &e = d.edges[a];
                    if (e.u >= p.n || e.v >= p.n) throw std::invalid_argument("edge vertex out of range");
                    if (e.u == e.v) throw std::invalid_argument("self-loop in max-cut graph");
                    for (std::size_t b = 0; b < a; ++b) {
                        const Edge &f = d.edges[b];
                        if ((f.u == e.u && f.v == e.v) || (f.u == e.v && f.v == e.u)) {
                            throw std::invalid_argument("duplicate edge in max-cut graph");
                        }
                    }
                }
            } else if constexpr (std::is_same_v<T, NumberPartitionData>) {
                if (d.numbers.size() != p.n) throw std::invalid_argument("number count != n");
                for (auto v : d.numbers) {
                    if (v <= 0) throw std::invalid_argument("partition numbers must be positive");
                }
            } else if constexpr (std::is_same_v<T, KnapsackData>) {
                if (d.weights.size() != p.n || d.values.size() != p.n) {
                    throw std::invalid_argument("knapsack weight/value count != n");
                }
                for (std::size_t i = 0; i < p.n; ++i) {
                    if (d.weights[i] <= 0 || d.values[i] <= 0) {
                        throw std::invalid_argument("knapsack weights and values must be positive");
                    }
                }
                if (d.capacity <= 0) throw std::invalid_argument("knapsack capacity must be positive");
                const auto cmax = *std::max_element(d.values.begin(), d.values.end());
                if (d.penalty != 2.0 * static_cast<double>(cmax)) {
                    throw std::invalid_argument("knapsack penalty must equal 2 * max value");
                }
            } else {
                for (const auto &c : d.couplings) {
                    if (c.i >= c.j || c.j >= p.n) throw std::invalid_argument("coupling must have i < j < n");
                    for (double v : {c.jx, c.jy, c.jz}) {
                        if (!(v > -1.0 && v < 1.0)) {
                            throw std::invalid_argument("spin-glass coupling outside (-1, 1)");
                        }
                    }
                }
            }
        },
        p.payload);
    const bool kind_matches =
        (p.kind == ProblemKind::MaxCut && std::holds_alternative<MaxCutData>(p.payload)) ||
        (p.kind == ProblemKind::NumberPartition && std::holds_alternative<NumberPartitionData>(p.payload)) ||
        (p.kind == ProblemKind::Knapsack && std::holds_alternative<KnapsackData>(p.payload)) ||
        (p.kind == ProblemKind::SpinGlass && std::holds_alternative<SpinGlassData>(p.payload));
    if (!kind_matches) throw std::invalid_argument("instance kind does not match its payload");
}

inline ProblemInstance make_maxcut(std::size_t n, std::vector<Edge> edges, std::uint64_t seed = 0,
                                   double edge_probability = 0.5) {
    ProblemInstance p{ProblemKind::MaxCut, n, seed, MaxCutData{std::move(edges), edge_probability}};
    validate(p);
    return p;
}

inline ProblemInstance make_numpart(std::vector<std::int64_t> numbers, std::uint64_t seed = 0) {
    const std::size_t n = numbers.size();
    ProblemInstance p{ProblemKind::NumberPartition, n, seed, NumberPartitionData{std::move(numbers)}};
    validate(p);
    return p;
}

/// Penalty is fixed at 2 * max(values).
inline ProblemInstance make_knapsack(std::vector<std::int64_t> weights,
                                     std::vector<std::int64_t> values, std::int64_t capacity,
                                     std::uint64_t seed = 0) {
    if (values.empty()) throw std::invalid_argument("knapsack needs at least one item");
    const std::size_t n = values.size();
    const double penalty = 2.0 * static_cast<double>(*std::max_element(values.begin(), values.end()));
    ProblemInstance p{ProblemKind::Knapsack, n, seed,
                      KnapsackData{std::move(weights), std::move(values), capacity, penalty}};
    validate(p);
    return p;
}

inline ProblemInstance make_spinglass(std::size_t n, std::vector<Coupling> couplings,
                                      std::uint64_t seed = 0, double mu = 0.0, double sigma = 0.3) {
    ProblemInstance p{ProblemKind::SpinGlass, n, seed, SpinGlassData{std::move(couplings), mu, sigma}};
    validate(p);
    return p;
}

// ---------------------------------------------------------------------------
// Generators

/// Erdos-Renyi G(n, p); redraws until at least one edge exists.
inline ProblemInstance gen_maxcut(std::size_t n, double edge_probability, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_maxcut: n must be at least 2");
    if (!(edge_probability > 0.0 && edge_probability <= 1.0)) {
        throw std::invalid_argument("gen_maxcut: edge probability must lie in (0, 1]");
    }
    Rng rng(seed);
    std::bernoulli_distribution coin(edge_probability);
    std::vector<Edge> edges;
    while (edges.empty()) {
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                if (coin(rng)) edges.push_back({u, v});
            }
        }
    }
    return make_maxcut(n, std::move(edges), seed, edge_probability);
}

inline ProblemInstance gen_numpart(std::size_t n, std::int64_t value_max, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_numpart: n must be at least 2");
    if (value_max < 1) throw std::invalid_argument("gen_numpart: value_max must be positive");
    Rng rng(seed);
    std::uniform_int_distribution<std::int64_t> draw(1, value_max);
    std::vector<std::int64_t> numbers(n);
    for (auto &v : numbers) v = draw(rng);
    return make_numpart(std::move(numbers), seed);
}

/// Capacity is ceil(sum(weights) / 2).
inline ProblemInstance gen_knapsack(std::size_t n, std::int64_t value_max, std::int64_t weight_max,
                                    std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_knapsack: n must be at least 2");
    if (value_max < 1 || weight_max < 1) {
        throw std::invalid_argument("gen_knapsack: value and weight ranges must be positive");
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::int64_t> draw_value(1, value_max);
    std::uniform_int_distribution<std::int64_t> draw_weight(1, weight_max);
    std::vector<std::int64_t> values(n);
    std::vector<std::int64_t> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = draw_value(rng);
        weights[i] = draw_weight(rng);
    }
    const std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    return make_knapsack(std::move(weights), std::move(values), (total + 1) / 2, seed);
}

/// Normal(mu, sigma) restricted to the open interval (lo, hi) by rejection.
inline double truncated_normal(Rng &rng, double mu, double sigma, double lo, double hi) {
    std::normal_distribution<double> normal(mu, sigma);
    for (;;) {
        const double x = normal(rng);
        if (x > lo && x < hi) return x;
    }
}

inline ProblemInstance gen_spinglass(std::size_t n, std::uint64_t seed, double mu = 0.0,
                                     double sigma = 0.3, double lo = -1.0, double hi = 1.0) {
    if (n < 2) throw std::invalid_argument("gen_spinglass: n must be at least 2");
    if (!(lo < mu && mu < hi)) throw std::invalid_argument("gen_spinglass: bounds must straddle mu");
    if (!(sigma > 0.0)) throw std::invalid_argument("gen_spinglass: sigma must be positive");
    Rng rng(seed);
    std::vector<Coupling> couplings;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) couplings.push_back({i, j, 0.0, 0.0, 0.0});
    }
    for (auto &c : couplings) c.jx = truncated_normal(rng, mu, sigma, lo, hi);
    for (auto &c : couplings) c.jy = truncated_normal(rng, mu, sigma, lo, hi);
    for (auto &c : couplings) c.jz = truncated_normal(rng, mu, sigma, lo, hi);
    return make_spinglass(n, std::move(couplings), seed, mu, sigma);
}

// ---------------------------------------------------------------------------
// Hamiltonians

/// (1 + Z_i) / 2, the occupation operator q_i.
inline PauliSum occupation(std::size_t n, std::size_t i) {
    return PauliSum(n, {PauliString(n, 0.5), PauliString::single(n, i, Pauli::Z, 0.5)});
}

/// Driver -sum_i X_i; also the negated mixing Hamiltonian.
inline PauliSum driver_hamiltonian(std::size_t n) {
    PauliSum h(n);
    for (std::size_t i = 0; i < n; ++i) h.add(PauliString::single(n, i, Pauli::X, -1.0));
    return h;
}

inline PauliSum mixing_hamiltonian(std::size_t n) { return simplify(driver_hamiltonian(n) * -1.0); }

inline PauliSum build_hamiltonian(const ProblemInstance &p) {
    const std::size_t n = p.n;
    switch (p.kind) {
    case ProblemKind::MaxCut: {
        PauliSum h(n);
        for (const Edge &e : p.as<MaxCutData>().edges) {
            h.add(PauliString(n, -0.5));
            h.add(PauliString::pair(n, e.u, Pauli::Z, e.v, Pauli::Z, 0.5));
        }
        return simplify(h);
    }
    case ProblemKind::NumberPartition: {
        PauliSum s(n);
        const auto &nums = p.as<NumberPartitionData>().numbers;
        for (std::size_t i = 0; i < n; ++i) {
            s.add(PauliString::single(n, i, Pauli::Z, static_cast<double>(nums[i])));
        }
        return simplify(s * s);
    }
    case ProblemKind::Knapsack: {
        const auto &d = p.as<KnapsackData>();
        PauliSum value(n);
        PauliSum load = PauliSum::identity(n, -static_cast<double>(d.capacity));
        for (std::size_t i = 0; i < n; ++i) {
            value += occupation(n, i) * static_cast<double>(d.values[i]);
            load += occupation(n, i) * static_cast<double>(d.weights[i]);
        }
        load = simplify(load);
        return simplify(value * -1.0 + (load * load) * d.penalty);
    }
    case ProblemKind::SpinGlass: {
        PauliSum h(n);
        for (const auto &c : p.as<SpinGlassData>().couplings) {
            h.add(PauliString::pair(n, c.i, Pauli::X, c.j, Pauli::X, c.jx));
            h.add(PauliString::pair(n, c.i, Pauli::Y, c.j, Pauli::Y, c.jy));
            h.add(PauliString::pair(n, c.i, Pauli::Z, c.j, Pauli::Z, c.jz));
        }
        return simplify(h);
    }
    }
    throw std::logic_error("unhandled problem kind");
}

// ---------------------------------------------------------------------------
// Classical cost functions (evaluated from raw data, not from the Hamiltonian)

/// Spin value of qubit i in basis state b: +1 for bit 0, -1 for bit 1.
inline int spin(std::uint64_t b, std::size_t i) { return ((b >> i) & 1U) ? -1 : 1; }

/// Items selected by a basis state: item i is taken when bit i is 0.
inline std::vector<bool> knapsack_selection(std::uint64_t b, std::size_t n) {
    std::vector<bool> take(n);
    for (std::size_t i = 0; i < n; ++i) take[i] = ((b >> i) & 1U) == 0;
    return take;
}

inline double classical_cost(const ProblemInstance &p, std::uint64_t b) {
    switch (p.kind) {
    case ProblemKind::MaxCut: {
        std::int64_t cut = 0;
        for (const Edge &e : p.as<MaxCutData>().edges) cut += spin(b, e.u) != spin(b, e.v);
        return -static_cast<double>(cut);
    }
    case ProblemKind::NumberPartition: {
        std::int64_t diff = 0;
        const auto &nums = p.as<NumberPartitionData>().numbers;
        for (std::size_t i = 0; i < p.n; ++i) diff += spin(b, i) * nums[i];
        return static_cast<double>(diff * diff);
    }
    case ProblemKind::Knapsack: {
        const auto &d = p.as<KnapsackData>();
        std::int64_t value = 0;
        std::int64_t load = -d.capacity;
        const auto take = knapsack_selection(b, p.n);
        for (std::size_t i = 0; i < p.n; ++i) {
            if (take[i]) {
                value += d.values[i];
                load += d.weights[i];
            }
        }
        return -static_cast<double>(value) + d.penalty * static_cast<double>(load * load);
    }
    case ProblemKind::SpinGlass:
        throw std::invalid_argument("the quantum spin glass has no classical cost function");
    }
    throw std::logic_error("unhandled problem kind");
}

/// Exhaustive search over all 2^n assignments of a classical instance.
inline GroundTruth brute_force_classical(const ProblemInstance &p) {
    if (!p.is_classical()) {
        throw std::invalid_argument("brute_force_classical called on a spin-glass instance");
    }
    if (p.n > 24) throw std::invalid_argument("brute_force_classical limited to n <= 24");
    const std::uint64_t dim = std::uint64_t{1} << p.n;
    GroundTruth gt;
    gt.energy = std::numeric_limits<double>::infinity();
    for (std::uint64_t b = 0; b < dim; ++b) {
        const double c = classical_cost(p, b);
        if (c < gt.energy) {
            gt.energy = c;
            gt.optimal_bitstrings.clear();
        }
        if (c == gt.energy) gt.optimal_bitstrings.push_back(b);
    }
    gt.degeneracy = gt.optimal_bitstrings.size();
    if (p.n <= kDenseQubitLimit) {
        for (auto b : gt.optimal_bitstrings) gt.subspace.push_back(StateVector::basis(p.n, b));
    }
    return gt;
}

/**
 * Dense Hermitian diagonalization; the ground subspace collects eigenvectors
 * within degeneracy_tol of the minimum. A negative tolerance selects the
 * default 1e-9 * max(1, |E0|).
 */
inline GroundTruth exact_ground_subspace(const PauliSum &h, double degeneracy_tol = -1.0) {
    if (h.n_qubits() > 12) throw std::invalid_argument("exact_ground_subspace limited to 12 qubits");
    const Eigen::MatrixXcd m = to_matrix(h);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("exact_ground_subspace requires a Hermitian operator");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const Eigen::VectorXd &vals = eig.eigenvalues();
    GroundTruth gt;
    gt.energy = vals(0);
    const double tol = degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-9 * std::max(1.0, std::abs(gt.energy));
    const std::size_t dim = static_cast<std::size_t>(m.rows());
    for (Eigen::Index k = 0; k < vals.size() && vals(k) - gt.energy <= tol; ++k) {
        std::vector<cplx> amps(dim);
        for (std::size_t i = 0; i < dim; ++i) amps[i] = eig.eigenvectors()(static_cast<Eigen::Index>(i), k);
        gt.subspace.emplace_back(h.n_qubits(), std::move(amps));
    }
    gt.degeneracy = gt.subspace.size();
    if (h.is_diagonal()) {
        const Eigen::VectorXd diag = m.diagonal().real();
        for (std::size_t i = 0; i < dim; ++i) {
            if (diag(static_cast<Eigen::Index>(i)) - gt.energy <= tol) gt.optimal_bitstrings.push_back(i);
        }
    }
    return gt;
}

/// The oracle matching the instance family.
inline GroundTruth ground_truth(const ProblemInstance &p) {
    return p.is_classical() ? brute_force_classical(p) : exact_ground_subspace(build_hamiltonian(p));
}

/// Brute-force constrained knapsack optimum: (best value, all optimal selections as basis indices).
inline std::pair<std::int64_t, std::vector<std::uint64_t>> knapsack_constrained_optimum(
    const ProblemInstance &p) {
    const auto &d = p.as<KnapsackData>();
    std::int64_t best = -1;
    std::vector<std::uint64_t> arg;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << p.n); ++b) {
        std::int64_t w = 0;
        std::int64_t v = 0;
        const auto take = knapsack_selection(b, p.n);
        for (std::size_t i = 0; i < p.n; ++i) {
            if (take[i]) {
                w += d.weights[i];
                v += d.values[i];
            }
        }
        if (w > d.capacity) continue;
        if (v > best) {
            best = v;
            arg.clear();
        }
        if (v == best) arg.push_back(b);
    }
    return {best, arg};
}

} // namespace qbench
