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


#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "rydladder/dist.hpp"
#include "rydladder/lattice.hpp"
#include "rydladder/noise.hpp"
#include "rydladder/state.hpp"

namespace rydladder::oracle {

/// Dense Hamiltonian built from Pauli matrices and Kronecker products, with
/// distances recomputed from raw coordinates.
inline Eigen::MatrixXd dense_hamiltonian(const LadderSystem& sys) {
    const int n = sys.n_atoms();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::Matrix2d sx;
    sx << 0, 1, 1, 0;
    Eigen::Matrix2d nr;
    nr << 0, 0, 0, 1;
    auto embed = [&](const std::vector<std::pair<int, Eigen::Matrix2d>>& ops) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(1, 1);
        for (int k = n - 1; k >= 0; --k) {
            Eigen::Matrix2d f = Eigen::Matrix2d::Identity();
            for (const auto& [atom, op] : ops) {
                if (atom == k) f = op;
            }
            Eigen::MatrixXd next(m.rows() * 2, m.cols() * 2);
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
            }
            m = next;
        }
        return m;
    };
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        h += 0.5 * sys.omega * embed({{i, sx}});
        h -= sys.delta * embed({{i, nr}});
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double xi = (i / 2) * sys.a, yi = (i % 2) * sys.aspect_ratio * sys.a;
            const double xj = (j / 2) * sys.a, yj = (j % 2) * sys.aspect_ratio * sys.a;
            const double r2 = (xi - xj) * (xi - xj) + (yi - yj) * (yi - yj);
            if (sys.cutoff_radius > 0.0 && std::sqrt(r2) > sys.cutoff_radius) continue;
            h += sys.c6 / (r2 * r2 * r2) * embed({{i, nr}, {j, nr}});
        }
    }
    return h;
}

/// Reduced density matrix by explicit summation over every pair of basis
/// states that agree on the traced atoms.
inline Eigen::MatrixXcd partial_trace(const PureState& psi, const std::vector<int>& keep) {
    const int n = psi.n_atoms;
    const Eigen::Index d = Eigen::Index{1} << keep.size();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    auto sub = [&](Bits b) {
        Bits r = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) r |= ((b >> keep[i]) & 1u) << i;
        return r;
    };
    Bits keep_mask = 0;
    for (int k : keep) keep_mask |= Bits{1} << k;
    for (Bits x = 0; x < (Bits{1} << n); ++x) {
        for (Bits y = 0; y < (Bits{1} << n); ++y) {
            if ((x & ~keep_mask) != (y & ~keep_mask)) continue;
            rho(static_cast<Eigen::Index>(sub(x)), static_cast<Eigen::Index>(sub(y))) +=
                psi.amplitudes[x] * std::conj(psi.amplitudes[y]);
        }
    }
    return rho;
}

inline double entropy_of(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()(i);
        if (l > 1e-14) s -= l * std::log(l);
    }
    return s;
}

/// Shannon entropy of a dense probability vector, in nats.
inline double shannon(const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p) {
        if (x > 0.0) s -= x * std::log(x);
    }
    return s;
}

/// Dense marginal over the atoms in `keep`, in the packed order.
inline std::vector<double> dense_marginal(const std::vector<double>& p, int n_atoms, const std::vector<int>& keep) {
    std::vector<double> out(std::size_t{1} << keep.size(), 0.0);
    for (Bits x = 0; x < (Bits{1} << n_atoms); ++x) {
        Bits r = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) r |= ((x >> keep[i]) & 1u) << i;
        out[r] += p[x];
    }
    return out;
}

/// Reduced assignment matrix with normalized columns, solved by dense LU.
inline std::vector<double> dense_m3(const std::vector<Bits>& support, const std::vector<double>& noisy, int n_atoms,
                                    const ReadoutModel& m) {
    const auto n = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double v = 1.0;
            for (int k = 0; k < n_atoms; ++k) v *= m.confusion((support[i] >> k) & 1u, (support[j] >> k) & 1u);
            a(i, j) = v;
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) a.col(j) /= a.col(j).sum();
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(noisy.data(), n);
    const Eigen::VectorXd x = a.partialPivLu().solve(b);
    return {x.data(), x.data() + n};
}

/// Haar-like random state from normal amplitudes.
inline PureState random_state(int n_atoms, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    PureState s(n_atoms);
    for (auto& c : s.amplitudes) c = Complex(g(rng), g(rng));
    s.normalize();
    return s;
}

/// Random state with real amplitudes on a random subset of the basis.
inline PureState random_sparse_state(int n_atoms, std::mt19937_64& rng, double keep = 0.5) {
    std::normal_distribution<double> g;
    std::bernoulli_distribution b(keep);
    PureState s(n_atoms);
    s.amplitudes[0] = 1.0;
    for (auto& c : s.amplitudes) {
        if (b(rng)) c = Complex(g(rng), 0.0);
    }
    s.normalize();
    return s;
}

}  // namespace rydladder::oracle
