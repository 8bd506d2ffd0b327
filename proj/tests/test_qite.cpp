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


#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "qbench/instance_io.hpp"
#include "qbench/qite.hpp"
#include "support.hpp"

using namespace qbench;

namespace {

const PauliSum kX(1, {PauliString::parse("X")});
const PauliSum kZ(1, {PauliString::parse("Z")});

PauliSum random_sum(std::size_t n, std::mt19937_64 &rng, bool diagonal) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    if (diagonal) return support::diagonal_sum(oracle::random_diagonal(n, rng), n);
    PauliSum h(n);
    const auto basis = PauliBasis::full(n);
    for (const auto &s : basis.strings()) h.add(PauliString(s.letters(), u(rng)));
    return h;
}

StateVector random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto &x : a) x = {g(rng), g(rng)};
    StateVector s(n, std::move(a));
    s.normalize();
    return s;
}

double infidelity(const StateVector &a, const oracle::Vec &b) {
    return std::max(0.0, 1.0 - oracle::overlap2(support::vec(a), b));
}

ProblemInstance maxcut_fixture() {
    std::ifstream is(std::string(QBENCH_FIXTURE_DIR) + "/maxcut_n5_seed100.jsonl");
    return read_instances(is).at(1);
}

} // namespace

TEST(PauliBasisTest, SizesAndValidation) {
    EXPECT_EQ(PauliBasis::full(1).size(), 3U);
    EXPECT_EQ(PauliBasis::full(5).size(), 1023U);
    EXPECT_TRUE(PauliBasis::full(3).complete());
    EXPECT_EQ(PauliBasis::local(3, 1).size(), 9U);
    EXPECT_FALSE(PauliBasis::local(3, 2).complete());
    EXPECT_THROW(PauliBasis(1, {PauliString::parse("I")}), std::invalid_argument);
    EXPECT_THROW(PauliBasis(1, {PauliString::parse("X", 2.0)}), std::invalid_argument);
    EXPECT_THROW(PauliBasis(1, {PauliString::parse("X"), PauliString::parse("X")}), std::invalid_argument);
    EXPECT_THROW(PauliBasis(2, {PauliString::parse("X")}), std::invalid_argument);
}

TEST(McLachlan, ZeroHamiltonianFreezesParameters) {
    const auto c = su2_ansatz(2, 1);
    const std::vector<double> th{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    EXPECT_EQ(mclachlan_step(c, th, PauliSum(2), 0.1), th);
}

TEST(McLachlan, RegularizationShrinksVelocity) {
    const auto c = su2_ansatz(2, 1);
    const std::vector<double> th{0.3, -0.2, 0.5, 0.1, 0.9, -0.4, 0.2, 0.6};
    const auto h = build_hamiltonian(make_maxcut(2, {{0, 1}})) + PauliSum(2, {PauliString::parse("XI", 0.3)});
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}) {
        const double v = mclachlan_derivative(c, th, CompiledOperator(h), lambda).theta_dot.norm();
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 1e-2);
}

TEST(McLachlan, SingleQubitTracksExactEvolution) {
    // RY(theta)|0> under H = X from theta = 0: exact <X>(tau) = -tanh(2 tau).
    const ParamCircuit c(1, {{GateKind::RY, {0}, 0}}, 1);
    const auto run = mclachlan_evolve(constant_schedule(kX, 1.0), c, {0.0}, 1e-3);
    const auto exact = imag_time_evolve(kX, StateVector::basis(1, 0), 1e-3, 1.0);
    EXPECT_NEAR(run.trajectory.energies.back(), exact.energies.back(), 1e-3);
    EXPECT_NEAR(exact.energies.back(), -std::tanh(2.0), 1e-8);
}

TEST(McLachlan, EnergyNonIncreasingWhenSolveIsAccurate) {
    const ParamCircuit c(2, {{GateKind::RY, {0}, 0}, {GateKind::RY, {1}, 1}, {GateKind::CX, {0, 1}}, {GateKind::RY, {1}, 2}}, 3);
    const PauliSum h(2, {PauliString::parse("ZZ", 0.8), PauliString::parse("XI", -0.5), PauliString::parse("IZ", 0.3)});
    const auto run = mclachlan_evolve(constant_schedule(h, 2.0), c, {0.4, -0.3, 0.2}, 1e-3, 0.0, {nullptr, 1});
    if (run.max_residual <= 1e-8) {
        for (std::size_t k = 1; k < run.trajectory.energies.size(); ++k) {
            EXPECT_LE(run.trajectory.energies[k], run.trajectory.energies[k - 1] + 1e-6);
        }
    }
    EXPECT_LT(run.trajectory.energies.back(), run.trajectory.energies.front());
}

TEST(AnsatzFree, SingleQubitStepMatchesExact) {
    const double dt = 1e-2;
    const auto exact = oracle::imag_evolve(support::dense(kZ), oracle::plus(1), dt);
    const auto basis = PauliBasis::full(1);
    EXPECT_LE(infidelity(ansatz_free_step(plus_state(1), kZ, dt, basis), exact), 10 * dt * dt);
    EXPECT_LE(infidelity(ansatz_free_step_generic(plus_state(1), CompiledOperator(kZ), dt, basis), exact), 10 * dt * dt);
}

TEST(AnsatzFree, EigenstateIsFixed) {
    const auto h = build_hamiltonian(gen_maxcut(3, 0.8, 1));
    const auto s = StateVector::basis(3, 5);
    const auto out = ansatz_free_step(s, h, 0.1, PauliBasis::full(3));
    EXPECT_LT((support::vec(out) - support::vec(s)).norm(), 1e-8);
    const auto loc = ansatz_free_step(s, h, 0.1, PauliBasis::local(3, 1));
    EXPECT_LT((support::vec(loc) - support::vec(s)).norm(), 1e-8);
}

TEST(AnsatzFree, ClosedFormMatchesGenericFit) {
    std::mt19937_64 rng(12);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto h = random_sum(n, rng, trial % 2 == 0);
            const auto s = random_state(n, rng);
            const CompiledOperator op(h);
            const auto basis = PauliBasis::full(n);
            const auto a = ansatz_free_step_complete(s, op, 0.05, kDefaultRegularization);
            const auto b = ansatz_free_step_generic(s, op, 0.05, basis, kDefaultRegularization);
            EXPECT_LT((support::vec(a) - support::vec(b)).norm(), 1e-10) << "n=" << n;
        }
    }
}

TEST(AnsatzFree, FullBasisTracksExactTrajectory) {
    std::mt19937_64 rng(4);
    const auto h = random_sum(2, rng, false);
    const auto run = ansatz_free_evolve(constant_schedule(h, 1.0), plus_state(2), 0.01, PauliBasis::full(2));
    const auto exact = oracle::imag_evolve(support::dense(h), oracle::plus(2), 1.0);
    EXPECT_GE(1.0 - infidelity(run.trajectory.final_state, exact), 0.999);
}

TEST(AnsatzFree, StepErrorIsSecondOrder) {
    std::mt19937_64 rng(8);
    for (std::size_t n = 2; n <= 3; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto h = random_sum(n, rng, true);
            const auto s = random_state(n, rng);
            auto err = [&](double dt) {
                return infidelity(ansatz_free_step(s, h, dt, PauliBasis::full(n)),
                                  oracle::imag_evolve(support::dense(h), support::vec(s), dt));
            };
            EXPECT_GE(err(0.1) / err(0.05), 3.0) << "n=" << n;
        }
    }
}

TEST(RunQite, AnsatzFreeMaxCutFixture) {
    const auto p = maxcut_fixture();
    const auto gt = ground_truth(p);
    const SubspaceProjector proj(gt.subspace);
    QiteConfig cfg;
    cfg.dt = 0.1;
    cfg.T = 1000.0;
    const auto run = run_qite(build_hamiltonian(p), cfg, &proj);
    EXPECT_EQ(run.basis_size, 1023U);
    EXPECT_EQ(run.steps, 10000U);
    EXPECT_GE(run.trajectory.fidelities.back(), 0.99);
    const auto exact = imag_time_evolve(build_hamiltonian(p), plus_state(5), 0.1, 1000.0);
    EXPECT_GE(proj.fidelity(exact.final_state), 0.999);
}

TEST(RunQite, ZeroHamiltonianKeepsFidelity) {
    const auto p = make_spinglass(3, {});
    const auto h = build_hamiltonian(p);
    const SubspaceProjector proj({StateVector::basis(3, 0), StateVector::basis(3, 1)});
    for (auto mode : {QiteMode::AnsatzFree, QiteMode::AnsatzBased}) {
        QiteConfig cfg;
        cfg.mode = mode;
        cfg.dt = 0.1;
        cfg.T = 1.0;
        cfg.every = 1;
        const auto run = run_qite(h, cfg, &proj);
        for (double f : run.trajectory.fidelities) EXPECT_NEAR(f, run.trajectory.fidelities.front(), 1e-12);
    }
}

TEST(RunQite, QiteBeatsItqaAtShortTime) {
    const auto p = maxcut_fixture();
    const auto gt = ground_truth(p);
    const SubspaceProjector proj(gt.subspace);
    QiteConfig cfg;
    cfg.dt = 0.01;
    cfg.T = 1.0;
    const double qite = run_qite(build_hamiltonian(p), cfg, &proj).trajectory.fidelities.back();
    cfg.schedule = ScheduleKind::Qa;
    const double itqa = run_qite(build_hamiltonian(p), cfg, &proj).trajectory.fidelities.back();
    EXPECT_GE(qite, itqa);
}

TEST(RunQite, ConfigValidationAndMetadata) {
    EXPECT_THROW(validated_steps(1.0, 0.3), std::invalid_argument);
    EXPECT_THROW(validated_steps(0.05, 0.1), std::invalid_argument);
    EXPECT_EQ(validated_steps(1e-3, 1e-7), 10000U);
    EXPECT_EQ(validated_steps(0.2, 1e-5), 20000U);
    QiteConfig cfg;
    cfg.mode = QiteMode::AnsatzBased;
    cfg.dt = 0.1;
    cfg.T = 0.2;
    const auto run = run_qite(build_hamiltonian(make_maxcut(2, {{0, 1}})), cfg);
    EXPECT_EQ(run.parameter_count, 12U);
    std::ostringstream os;
    write_qite_metadata(os, cfg, run);
    EXPECT_EQ(os.str(), "{\"mode\":\"ansatz_based\",\"schedule\":\"constant\",\"dt\":0.1,\"T\":0.2,"
                        "\"lambda\":1e-06,\"basis_size\":0,\"parameter_count\":12,\"steps\":2}\n");
}
