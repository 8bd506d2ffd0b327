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
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "qbench/bench.hpp"
#include "qbench/dynamics.hpp"
#include "qbench/instance_io.hpp"
#include "support.hpp"

using namespace qbench;

namespace {

const PauliSum kZ(1, {PauliString::parse("Z")});
const PauliSum kX(1, {PauliString::parse("X")});

PauliSum fixed_three_qubit() {
    return PauliSum(3, {PauliString::parse("ZZI", 0.7), PauliString::parse("IZZ", -0.4), PauliString::parse("XII", 0.3),
                        PauliString::parse("IYI", 0.2), PauliString::parse("IIZ", 0.5)});
}

ProblemInstance maxcut_fixture() {
    std::ifstream is(std::string(QBENCH_FIXTURE_DIR) + "/maxcut_n5_seed100.jsonl");
    return read_instances(is).at(1);
}

double two_level_fidelity(double tau) {
    return std::exp(2 * tau) / (std::exp(2 * tau) + std::exp(-2 * tau));
}

} // namespace

TEST(QaSchedule, EndpointsAndMidpoint) {
    const auto hp = build_hamiltonian(gen_maxcut(4, 0.5, 3));
    const auto s = qa_schedule(hp, 7.0);
    EXPECT_EQ(s.hamiltonian_at(0.0).terms(), simplify(driver_hamiltonian(4)).terms());
    EXPECT_EQ(s.hamiltonian_at(7.0).terms(), hp.terms());
    const auto mid = support::dense(s.hamiltonian_at(3.5));
    const oracle::Mat ref = 0.5 * support::dense(hp) + 0.5 * support::dense(driver_hamiltonian(4));
    EXPECT_LT((mid - ref).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(s.hamiltonian_at(7.5), std::out_of_range);
    EXPECT_THROW(qa_schedule(hp, 0.0), std::invalid_argument);
}

TEST(RealTime, DriverEigenstateIsStationary) {
    const auto h = driver_hamiltonian(3);
    const SubspaceProjector plus({plus_state(3)});
    const auto tr = real_time_evolve(constant_schedule(h, 5.0), plus_state(3), 1e-2, {&plus, 1});
    for (double f : tr.fidelities) EXPECT_NEAR(f, 1.0, 1e-8);
}

TEST(RealTime, RabiPeriod) {
    const auto tr = real_time_evolve(constant_schedule(kX, std::numbers::pi), StateVector::basis(1, 0), 1e-3);
    EXPECT_NEAR(tr.final_state[0].real(), -1.0, 1e-9);
    EXPECT_NEAR(std::abs(tr.final_state[1]), 0.0, 1e-9);
    EXPECT_LT(tr.norm_drift, 1e-6);
}

TEST(RealTime, LargeStepTripsDriftGuard) {
    EXPECT_THROW(real_time_evolve(constant_schedule(kX * 10.0, 10.0), StateVector::basis(1, 0), 0.2),
                 std::runtime_error);
}

TEST(RealTime, MatchesDenseExponentialAndIsFourthOrder) {
    const auto h = fixed_three_qubit();
    std::mt19937_64 rng(1);
    const auto s0 = plus_state(3);
    const double T = 2.0;
    const oracle::Vec ref = oracle::expm_hermitian(support::dense(h), cplx(0.0, -T)) * support::vec(s0);
    const double e1 = (support::vec(real_time_evolve(constant_schedule(h, T), s0, 0.04).final_state) - ref).norm();
    const double e2 = (support::vec(real_time_evolve(constant_schedule(h, T), s0, 0.02).final_state) - ref).norm();
    EXPECT_LT(e2, 1e-6);
    EXPECT_GT(e1 / e2, 12.0);
}

TEST(RealTime, QaFidelityGrowsWithDuration) {
    const auto p = maxcut_fixture();
    const auto h = build_hamiltonian(p);
    const auto gt = ground_truth(p);
    const SubspaceProjector proj(gt.subspace);
    double prev = -1.0;
    for (double T : {1.0, 5.0, 20.0, 100.0}) {
        const auto tr = real_time_evolve(qa_schedule(h, T), plus_state(5), 1e-2, {&proj, 0});
        EXPECT_GE(tr.fidelities.back(), prev) << "T=" << T;
        EXPECT_LE(tr.norm_drift, 1e-6);
        prev = tr.fidelities.back();
    }
    EXPECT_GT(prev, 0.9);
}

TEST(ImagTime, TwoLevelClosedForm) {
    const SubspaceProjector one({StateVector::basis(1, 1)});
    const auto tr = imag_time_evolve(kZ, plus_state(1), 1e-3, 2.0, {{&one, 1}});
    for (double tau : {0.5, 1.0, 2.0}) {
        const auto k = static_cast<std::size_t>(std::llround(tau / 1e-3));
        EXPECT_NEAR(tr.times[k], tau, 1e-12);
        EXPECT_NEAR(tr.fidelities[k], two_level_fidelity(tau), 1e-6);
    }
}

TEST(ImagTime, EigenstateIsUnchanged) {
    const auto h = build_hamiltonian(gen_maxcut(4, 0.5, 1));
    const auto s0 = StateVector::basis(4, 6);
    const auto tr = imag_time_evolve(h, s0, 0.05, 10.0);
    EXPECT_LT((support::vec(tr.final_state) - support::vec(s0)).norm(), 1e-8);
}

TEST(ImagTime, EnergyNonIncreasingForConstantH) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto h = build_hamiltonian(gen_spinglass(4, seed));
        const auto tr = imag_time_evolve(h, plus_state(4), 0.05, 20.0, {{nullptr, 1}});
        for (std::size_t k = 1; k < tr.energies.size(); ++k) EXPECT_LE(tr.energies[k], tr.energies[k - 1] + 1e-9);
    }
}

TEST(ImagTime, MatchesExactAndIsFourthOrder) {
    const auto h = fixed_three_qubit();
    const auto s0 = plus_state(3);
    const auto ref = oracle::imag_evolve(support::dense(h), support::vec(s0), 1.5);
    auto err = [&](double dt) {
        const auto v = support::vec(imag_time_evolve(h, s0, dt, 1.5).final_state);
        return std::sqrt(std::max(0.0, 1.0 - oracle::overlap2(v, ref)));
    };
    const double e1 = err(0.1), e2 = err(0.05);
    EXPECT_LT(e2, 1e-5);
    EXPECT_GT(e1 / e2, 12.0);
}

TEST(ImagTime, ConvergesToGroundSubspace) {
    std::vector<ProblemInstance> fixtures;
    {
        std::ifstream is(std::string(QBENCH_FIXTURE_DIR) + "/maxcut_n5_seed100.jsonl");
        fixtures = read_instances(is);
    }
    for (const auto &p : make_suite(ProblemKind::MaxCut, 10, 5, 500)) fixtures.push_back(p);
    for (const auto &p : fixtures) {
        const auto gt = ground_truth(p);
        const SubspaceProjector proj(gt.subspace);
        ASSERT_GT(proj.fidelity(plus_state(5)), 1e-3);
        const auto tr = imag_time_evolve(build_hamiltonian(p), plus_state(5), 0.1, 1000.0);
        EXPECT_GE(proj.fidelity(tr.final_state), 1.0 - 1e-6) << p.id();
    }
}

TEST(ImagTime, GuardRejectsLargeSteps) {
    const auto h = kZ * 100.0;
    EXPECT_THROW(imag_time_evolve(h, StateVector::basis(1, 0), 0.01, 1.0), std::runtime_error);
    const auto tr = imag_time_evolve(kZ, StateVector::basis(1, 0), 0.2, 1.0);
    EXPECT_GT(tr.smoothness_warnings, 0U);
    // A constant offset does not count against the guard.
    const auto shifted = kZ + PauliSum::identity(1, 1e6);
    EXPECT_NO_THROW(imag_time_evolve(shifted, plus_state(1), 0.05, 1.0));
}

TEST(ImagTime, TrajectoryShapeAndCsv) {
    const SubspaceProjector one({StateVector::basis(1, 1)});
    const auto tr = imag_time_evolve(kZ, plus_state(1), 0.25, 1.0, {{&one, 1}});
    ASSERT_EQ(tr.times.size(), 5U);
    EXPECT_EQ(tr.energies.size(), 5U);
    EXPECT_EQ(tr.fidelities.size(), 5U);
    EXPECT_EQ(tr.times.front(), 0.0);
    EXPECT_EQ(tr.times.back(), 1.0);
    for (std::size_t k = 1; k < tr.times.size(); ++k) EXPECT_GT(tr.times[k], tr.times[k - 1]);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,energy,fidelity");
}

TEST(Truncation, ProductStateUnchanged) {
    std::mt19937_64 rng(2);
    StateVector s = plus_state(4);
    apply_gate_inplace(s, Gate::ry(0, 0.4));
    apply_gate_inplace(s, Gate::rz(2, 1.1));
    const auto r = truncate_bond_dimension(s, 1);
    EXPECT_NEAR(oracle::overlap2(support::vec(r.state), support::vec(s)), 1.0, 1e-12);
}

TEST(Truncation, FullRankIsIdentity) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (std::size_t n = 2; n <= 6; ++n) {
        std::vector<cplx> a(std::size_t{1} << n);
        for (auto &x : a) x = {g(rng), g(rng)};
        StateVector s(n, a);
        s.normalize();
        const auto r = truncate_bond_dimension(s, std::size_t{1} << (n / 2));
        EXPECT_LT((support::vec(r.state) - support::vec(s)).norm(), 1e-12);
        EXPECT_LT(r.discarded_weight, 1e-24);
    }
}

TEST(Truncation, BellStateHalves) {
    StateVector bell(2, {cplx(1 / std::sqrt(2.0)), 0.0, 0.0, cplx(1 / std::sqrt(2.0))});
    const auto r = truncate_bond_dimension(bell, 1);
    EXPECT_NEAR(oracle::overlap2(support::vec(r.state), support::vec(bell)), 0.5, 1e-12);
    EXPECT_NEAR(r.discarded_weight, 0.5, 1e-12);
    EXPECT_THROW(truncate_bond_dimension(bell, 0), std::invalid_argument);
}

TEST(Truncation, TensorModeMatchesExactForProductEvolution) {
    // Local fields only: the state stays a product state throughout.
    const PauliSum h(4, {PauliString::parse("ZIII", 0.3), PauliString::parse("IZII", -0.7),
                         PauliString::parse("IIZI", 0.2), PauliString::parse("IIIZ", 0.9)});
    const auto exact = imag_time_evolve(h, plus_state(4), 0.05, 5.0);
    ImagTimeOptions opts;
    opts.bond_dimension = 4;
    const auto tn = imag_time_evolve(h, plus_state(4), 0.05, 5.0, opts);
    EXPECT_LT((support::vec(exact.final_state) - support::vec(tn.final_state)).norm(), 1e-12);
}
