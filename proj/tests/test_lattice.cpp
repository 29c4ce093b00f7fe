// Copyright 2026 The rydladder Authors
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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rydladder/lattice.hpp"

namespace rydladder {
namespace {

TEST(BuildSystem, ReferenceDriveMatchesCalibration) {
    const LadderSystem sys = build_system(6, 4.1, 2.35, 3.5);
    EXPECT_NEAR(sys.omega, kTwoPi * 1.078224, 1e-9);
    EXPECT_NEAR(sys.omega / kTwoPi, 1.078224, 1e-9);
    EXPECT_NEAR(sys.delta, 3.5 * sys.omega, 1e-12);
    EXPECT_NEAR(sys.blockade_radius(), 2.35 * 4.1, 1e-9);
}

TEST(BuildSystem, UnitBlockadeGivesOmegaEqualC6) {
    const LadderSystem sys = build_system(2, 1.0, 1.0, 0.0, 5.0);
    EXPECT_DOUBLE_EQ(sys.omega, 5.0);
}

TEST(BuildSystem, DefaultC6RoundTrip) {
    const double expected = kTwoPi * 1.078224 * std::pow(2.35 * 4.1, 6);
    EXPECT_NEAR(default_c6() / expected, 1.0, 1e-6);
}

TEST(BuildSystem, RejectsInvalidParameters) {
    EXPECT_THROW(build_system(0, 4.1, 2.35, 3.5), ParameterError);
    EXPECT_THROW(build_system(2, -1.0, 2.35, 3.5), ParameterError);
    EXPECT_THROW(build_system(2, 4.1, 0.5, 3.5), ParameterError);
    EXPECT_THROW(build_system(2, 4.1, 2.35, 3.5, 0.0), ParameterError);
    EXPECT_THROW(build_system(2, 4.1, 2.35, std::nan("")), ParameterError);
    EXPECT_THROW(build_system(32, 4.1, 2.35, 3.5), ParameterError);
}

TEST(Geometry, AtomIndexing) {
    const LadderSystem sys = build_system(3, 4.1, 2.35, 3.5);
    EXPECT_EQ(sys.n_atoms(), 6);
    EXPECT_DOUBLE_EQ(sys.position(5).x, 2 * 4.1);
    EXPECT_DOUBLE_EQ(sys.position(5).y, 2 * 4.1);
    EXPECT_DOUBLE_EQ(sys.position(4).y, 0.0);
}

TEST(InteractionTable, ReferencePairs) {
    const LadderSystem sys = build_system(2, 4.1, 2.35, 3.5);
    const InteractionTable v = interaction_table(sys);
    EXPECT_NEAR(v(0, 1) / (sys.omega * std::pow(2.35 / 2.0, 6)), 1.0, 1e-12);
    EXPECT_NEAR(v(0, 2) / (sys.omega * std::pow(2.35, 6)), 1.0, 1e-12);
    EXPECT_NEAR(v(0, 3) / (sys.omega * std::pow(2.35 / std::sqrt(5.0), 6)), 1.0, 1e-12);
    EXPECT_EQ(v(2, 2), 0.0);
}

TEST(InteractionTable, SymmetricAndReflectionInvariant) {
    const LadderSystem sys = build_system(5, 4.1, 2.35, 3.5);
    const InteractionTable v = interaction_table(sys);
    const int n = sys.n_atoms();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            EXPECT_EQ(v(i, j), v(j, i));
            const int ri = 2 * (sys.n_rungs - 1 - i / 2) + i % 2;
            const int rj = 2 * (sys.n_rungs - 1 - j / 2) + j % 2;
            EXPECT_NEAR(v(i, j), v(ri, rj), 1e-9 * std::abs(v(i, j)) + 1e-300);
            EXPECT_NEAR(v(i, j), v(i ^ 1, j ^ 1), 1e-9 * std::abs(v(i, j)) + 1e-300);
        }
    }
}

TEST(InteractionTable, CutoffDropsFarPairs) {
    LadderSystem sys = build_system(3, 4.1, 2.35, 3.5);
    sys.cutoff_radius = 4.2;
    const InteractionTable v = interaction_table(sys);
    EXPECT_GT(v(0, 2), 0.0);
    EXPECT_EQ(v(0, 1), 0.0);
    EXPECT_EQ(v(0, 4), 0.0);
}

TEST(Hamiltonian, ZeroDriveOnVacuum) {
    LadderSystem sys = build_system(3, 4.1, 2.35, 3.5);
    sys.omega = 0.0;
    const PureState out = apply_hamiltonian(sys, PureState::basis(6, 0));
    EXPECT_EQ(out.norm(), 0.0);
}

TEST(Hamiltonian, ZeroDriveBasisEnergy) {
    LadderSystem sys = build_system(3, 4.1, 2.35, 3.5);
    sys.omega = 0.0;
    const InteractionTable v = interaction_table(sys);
    for (Bits n : {Bits{0b000101}, Bits{0b110011}, Bits{0b111111}}) {
        double e = -sys.delta * popcount(n);
        for (int i = 0; i < 6; ++i) {
            for (int j = i + 1; j < 6; ++j) {
                if (((n >> i) & 1u) && ((n >> j) & 1u)) e += v(i, j);
            }
        }
        const PureState out = apply_hamiltonian(sys, PureState::basis(6, n));
        for (std::size_t b = 0; b < out.dim(); ++b) {
            EXPECT_NEAR(out.amplitudes[b].real(), b == n ? e : 0.0, 1e-9 * std::abs(e));
            EXPECT_EQ(out.amplitudes[b].imag(), 0.0);
        }
    }
}

TEST(Hamiltonian, MatchesDenseOracleOnRandomVectors) {
    std::mt19937_64 rng(7);
    for (int n_rungs : {1, 2, 3, 4, 5}) {
        LadderSystem sys = build_system(n_rungs, 4.1, 1.0 + 0.5 * n_rungs, 0.7 * n_rungs - 1.0);
        const Eigen::MatrixXd dense = oracle::dense_hamiltonian(sys);
        const Hamiltonian h(sys);
        const PureState psi = oracle::random_state(sys.n_atoms(), rng);
        PureState out(sys.n_atoms());
        h.apply(psi.amplitudes, out.amplitudes);
        Eigen::VectorXcd x(static_cast<Eigen::Index>(psi.dim()));
        for (std::size_t i = 0; i < psi.dim(); ++i) x(static_cast<Eigen::Index>(i)) = psi.amplitudes[i];
        const Eigen::VectorXcd y = dense.cast<Complex>() * x;
        double err = 0.0;
        for (std::size_t i = 0; i < psi.dim(); ++i) err = std::max(err, std::abs(y(static_cast<Eigen::Index>(i)) - out.amplitudes[i]));
        EXPECT_LT(err, 1e-10 * dense.cwiseAbs().maxCoeff()) << n_rungs;
    }
}

TEST(Hamiltonian, RealAndComplexApplyAgree) {
    std::mt19937_64 rng(11);
    const LadderSystem sys = build_system(4, 4.1, 2.35, 3.5);
    const Hamiltonian h(sys);
    std::normal_distribution<double> g;
    std::vector<double> x(h.dim()), y(h.dim());
    std::vector<Complex> xc(h.dim()), yc(h.dim());
    for (std::size_t i = 0; i < x.size(); ++i) xc[i] = x[i] = g(rng);
    h.apply(x, y);
    h.apply(xc, yc);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], yc[i].real(), 1e-9);
}

TEST(Hamiltonian, Hermitian) {
    std::mt19937_64 rng(3);
    const LadderSystem sys = build_system(4, 4.1, 2.0, 1.5);
    const PureState a = oracle::random_state(8, rng);
    const PureState b = oracle::random_state(8, rng);
    const Complex lhs = inner(a, apply_hamiltonian(sys, b));
    const Complex rhs = std::conj(inner(b, apply_hamiltonian(sys, a)));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-9 * std::abs(lhs));
}

TEST(Hamiltonian, WithDriveKeepsCouplings) {
    const LadderSystem sys = build_system(3, 4.1, 2.35, 3.5);
    const Hamiltonian h(sys);
    const Hamiltonian h2 = h.with_drive(1.0, -2.0);
    LadderSystem s2 = sys;
    s2.omega = 1.0;
    s2.delta = -2.0;
    const Hamiltonian ref(s2);
    for (std::size_t b = 0; b < h.dim(); ++b) EXPECT_DOUBLE_EQ(h2.diagonal(b), ref.diagonal(b));
    EXPECT_EQ(h2.omega(), 1.0);
}

}  // namespace
}  // namespace rydladder
