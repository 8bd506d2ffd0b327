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


#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qbench/circuits.hpp"
#include "qbench/problems.hpp"
#include "support.hpp"

using namespace qbench;

namespace {

std::vector<double> random_theta(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    std::vector<double> t(k);
    for (auto &x : t) x = u(rng);
    return t;
}

oracle::Mat finite_difference(const ParamCircuit &c, const std::vector<double> &theta, double eps) {
    oracle::Mat j(Eigen::Index{1} << c.n_qubits(), static_cast<Eigen::Index>(theta.size()));
    for (std::size_t k = 0; k < theta.size(); ++k) {
        auto p = theta, m = theta;
        p[k] += eps;
        m[k] -= eps;
        j.col(static_cast<Eigen::Index>(k)) = (support::vec(evaluate(c, p)) - support::vec(evaluate(c, m))) / (2 * eps);
    }
    return j;
}

} // namespace

TEST(Qaoa, ZeroDepthAndZeroAnglesGivePlusState) {
    const auto h = build_hamiltonian(gen_maxcut(4, 0.5, 2));
    const auto plus = support::vec(plus_state(4));
    EXPECT_LT((support::vec(qaoa_state(h, {}, {})) - plus).norm(), 1e-15);
    const std::vector<double> z(3, 0.0);
    EXPECT_LT((support::vec(qaoa_state(h, z, z)) - plus).norm(), 1e-14);
}

TEST(Qaoa, SingleEdgeOptimumAgainstGridOracle) {
    const auto h = build_hamiltonian(make_maxcut(2, {{0, 1}}));
    const oracle::Mat hm = support::dense(h);
    const oracle::Mat mix = oracle::pauli_matrix("XI") + oracle::pauli_matrix("IX");
    // Grid search using dense exponentials, independent of the circuit code.
    double best = 1e9, best_g = 0.0, best_b = 0.0;
    const int steps = 64;
    for (int a = 0; a <= steps; ++a) {
        for (int b = 0; b <= steps; ++b) {
            const double g = std::numbers::pi * a / steps, be = std::numbers::pi * b / steps;
            const oracle::Vec v = oracle::expm_hermitian(mix, cplx(0, -be)) * (oracle::expm_hermitian(hm, cplx(0, -g)) * oracle::plus(2));
            const double e = (v.adjoint() * hm * v)(0).real();
            if (e < best) {
                best = e;
                best_g = g;
                best_b = be;
            }
        }
    }
    EXPECT_NEAR(best, -1.0, 1e-9);
    const std::vector<double> g{best_g}, b{best_b};
    EXPECT_NEAR(expectation(qaoa_state(h, g, b), h), -1.0, 1e-9);
}

TEST(Qaoa, MatchesDenseLayers) {
    const auto h = build_hamiltonian(gen_maxcut(4, 0.7, 5));
    const oracle::Mat hm = support::dense(h);
    const oracle::Mat mix = support::dense(mixing_hamiltonian(4));
    const std::vector<double> g{0.3, -0.8, 1.2}, b{0.9, 0.1, -0.4};
    oracle::Vec v = oracle::plus(4);
    for (int k = 0; k < 3; ++k) {
        v = oracle::expm_hermitian(hm, cplx(0, -g[k])) * v;
        v = oracle::expm_hermitian(mix, cplx(0, -b[k])) * v;
    }
    EXPECT_LT((support::vec(qaoa_state(h, g, b)) - v).norm(), 1e-12);
}

TEST(Qaoa, RejectsNonDiagonalUnlessDense) {
    const auto h = build_hamiltonian(gen_spinglass(3, 1));
    const std::vector<double> g{0.2}, b{0.3};
    EXPECT_THROW(qaoa_state(h, g, b), std::invalid_argument);
    const QaoaCircuit dense(h, QaoaCircuit::PhaseMode::AllowDense);
    EXPECT_TRUE(dense.uses_dense_phase());
    oracle::Vec v = oracle::expm_hermitian(support::dense(h), cplx(0, -0.2)) * oracle::plus(3);
    v = oracle::expm_hermitian(support::dense(mixing_hamiltonian(3)), cplx(0, -0.3)) * v;
    EXPECT_LT((support::vec(dense.state(g, b)) - v).norm(), 1e-12);
    const std::vector<double> two{0.1, 0.2};
    EXPECT_THROW(dense.state(g, two), std::invalid_argument);
}

TEST(Su2Ansatz, StructureAndIdentityPoint) {
    const auto c = su2_ansatz(5, 2);
    EXPECT_EQ(c.parameter_count(), 30U);
    const std::vector<double> zero(30, 0.0);
    EXPECT_LT((support::vec(evaluate(c, zero)) - support::vec(plus_state(5))).norm(), 1e-12);
    std::size_t cx = 0;
    for (const auto &g : c.gates()) cx += g.kind == GateKind::CX;
    EXPECT_EQ(cx, 8U);
    EXPECT_THROW(su2_ansatz(3, 0), std::invalid_argument);
}

TEST(Su2Ansatz, NormalizedAndDeterministic) {
    const auto c = su2_ansatz(4, 2);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto th = random_theta(c.parameter_count(), s);
        const auto a = evaluate(c, th);
        EXPECT_NEAR(a.norm(), 1.0, 1e-8);
        const auto b = evaluate(c, th);
        for (std::size_t i = 0; i < a.dim(); ++i) EXPECT_EQ(a[i], b[i]);
    }
    EXPECT_THROW(evaluate(c, std::vector<double>(3)), std::invalid_argument);
}

TEST(Su2Ansatz, MatchesDenseConstruction) {
    const std::size_t n = 3;
    const auto c = su2_ansatz(n, 1);
    const auto th = random_theta(c.parameter_count(), 42);
    auto one = [&](char p, std::size_t q, double a) {
        std::string s(n, 'I');
        s[q] = p;
        return oracle::expm_hermitian(oracle::pauli_matrix(s), cplx(0, -a / 2));
    };
    oracle::Mat cx01 = oracle::Mat::Zero(8, 8), cx12 = oracle::Mat::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
        cx01((i & 1) ? i ^ 2 : i, i) = 1.0;
        cx12((i & 2) ? i ^ 4 : i, i) = 1.0;
    }
    oracle::Vec v = oracle::plus(n);
    std::size_t k = 0;
    for (int layer = 0; layer < 2; ++layer) {
        for (std::size_t q = 0; q < n; ++q) v = one('Y', q, th[k++]) * v;
        for (std::size_t q = 0; q < n; ++q) v = one('Z', q, th[k++]) * v;
        if (layer == 0) v = cx12 * (cx01 * v);
    }
    EXPECT_LT((support::vec(evaluate(c, th)) - v).norm(), 1e-12);
}

TEST(ParamCircuitTest, SingleRyOnZero) {
    const ParamCircuit c(1, {{GateKind::RY, {0}, 0}}, 1);
    const auto s = evaluate(c, std::vector<double>{std::numbers::pi});
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
}

TEST(ParamCircuitTest, UnusedParameterRejected) {
    EXPECT_THROW(ParamCircuit(1, {{GateKind::RY, {0}, 0}}, 2), std::invalid_argument);
    EXPECT_THROW(ParamCircuit(1, {{GateKind::H, {0}, 0}}, 1), std::invalid_argument);
    EXPECT_THROW(ParamCircuit(1, {{GateKind::RY, {1}, 0}}, 1), std::invalid_argument);
}

TEST(Jacobian, RyAtZero) {
    const ParamCircuit c(1, {{GateKind::RY, {0}, 0}}, 1);
    const auto j = state_jacobian(c, std::vector<double>{0.0});
    EXPECT_NEAR(std::abs(j(0, 0)), 0.0, 1e-8);
    EXPECT_NEAR(j(1, 0).real(), 0.5, 1e-8);
    EXPECT_NEAR(j(1, 0).imag(), 0.0, 1e-8);
}

TEST(Jacobian, AnalyticGenerator) {
    StateVector base(2);
    apply_gate_inplace(base, Gate::h(0));
    apply_gate_inplace(base, Gate::ry(1, 0.7));
    const double th = 0.37;
    {
        const ParamCircuit c(2, {{GateKind::H, {0}}, {GateKind::RY, {1}, std::nullopt, 0.7}, {GateKind::RX, {1}, 0}}, 1);
        const auto psi = support::vec(evaluate(c, std::vector<double>{th}));
        const oracle::Vec ref = cplx(0, -0.5) * oracle::pauli_matrix("IX") * psi;
        EXPECT_LT((state_jacobian(c, std::vector<double>{th}).col(0) - ref).norm(), 1e-6);
    }
    {
        const auto p = PauliString::parse("XZ");
        const ParamCircuit c(2, {{GateKind::H, {0}}, {GateKind::PauliRotation, {}, 0, 0.0, p}}, 1);
        const auto psi = support::vec(evaluate(c, std::vector<double>{th}));
        const oracle::Vec ref = cplx(0, -0.5) * oracle::pauli_matrix("XZ") * psi;
        EXPECT_LT((state_jacobian(c, std::vector<double>{th}).col(0) - ref).norm(), 1e-6);
    }
}

TEST(Jacobian, CachedPathMatchesFiniteDifferences) {
    const auto c = su2_ansatz(4, 2);
    ASSERT_TRUE(c.single_use());
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto th = random_theta(c.parameter_count(), s);
        const auto j = state_jacobian(c, th);
        EXPECT_LT((j - finite_difference(c, th, 1e-6)).cwiseAbs().maxCoeff(), 1e-9);
        const auto psi = support::vec(evaluate(c, th));
        for (Eigen::Index k = 0; k < j.cols(); ++k) EXPECT_LT(std::abs(psi.dot(j.col(k)).real()), 1e-6);
    }
}

TEST(Jacobian, SharedParametersUseFullEvaluation) {
    const ParamCircuit c(2, {{GateKind::RY, {0}, 0}, {GateKind::RY, {1}, 0}, {GateKind::CX, {0, 1}}, {GateKind::RZ, {1}, 1}},
                         2);
    EXPECT_FALSE(c.single_use());
    const std::vector<double> th{0.4, -1.3};
    EXPECT_LT((state_jacobian(c, th) - finite_difference(c, th, 1e-6)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(state_jacobian(c, th, 0.0), std::invalid_argument);
}
