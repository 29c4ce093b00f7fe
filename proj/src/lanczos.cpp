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


#include "rydladder/lanczos.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "rydladder/common.hpp"

namespace rydladder {
namespace {

using Basis = Eigen::MatrixXd;

// Classical Gram-Schmidt against the first `count` columns, repeated when
// the first pass cancels most of the norm (DGKS criterion); returns the
// accumulated projection coefficients.
Eigen::VectorXd orthogonalize(const Basis& basis, Eigen::Index count, Eigen::Ref<Eigen::VectorXd> w) {
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(count);
    if (count == 0) return coeff;
    const auto v = basis.leftCols(count);
    double before = w.norm();
    for (int pass = 0; pass < 3; ++pass) {
        const Eigen::VectorXd h = v.transpose() * w;
        w.noalias() -= v * h;
        coeff += h;
        const double after = w.norm();
        if (after > 0.7071 * before) break;
        before = after;
    }
    return coeff;
}

Eigen::VectorXd random_unit(Eigen::Index dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = u(rng);
    v.normalize();
    return v;
}

}  // namespace

EigenPairs lowest_eigenpairs(std::size_t dim_in, const RealOperator& op, const LanczosOptions& options) {
    if (dim_in == 0) throw ParameterError("eigensolver needs a non-empty space");
    const auto dim = static_cast<Eigen::Index>(dim_in);
    const Eigen::Index nev = std::min<Eigen::Index>(std::max(options.nev, 1), dim);
    const Eigen::Index m = std::min<Eigen::Index>(std::max<Eigen::Index>(options.krylov_dim, nev + 2), dim);

    std::mt19937_64 rng(options.seed);
    // Column m holds the residual direction once the basis is full.
    Basis basis(dim, m + 1);
    basis.col(0) = random_unit(dim, rng);
    Eigen::Index filled = 1;

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    Eigen::Index j = 0;
    double beta_last = 0.0;
    EigenPairs out;
    Eigen::VectorXd w(dim);

    while (true) {
        while (j < m) {
            op(std::span<const double>(basis.col(j).data(), dim_in), std::span<double>(w.data(), dim_in));
            ++out.matvecs;
            const Eigen::VectorXd coeff = orthogonalize(basis, j + 1, w);
            t.col(j).head(j + 1) = coeff;
            t.row(j).head(j + 1) = coeff.transpose();
            double beta = w.norm();
            const double scale = std::max(std::abs(coeff(j)), 1.0);
            if (filled == dim) {
                beta = 0.0;  // whole space spanned
            } else if (beta <= 1e-13 * scale) {
                // Invariant subspace: continue with a direction orthogonal to it.
                beta = 0.0;
                w = random_unit(dim, rng);
                orthogonalize(basis, filled, w);
                w.normalize();
            } else {
                w /= beta;
            }
            beta_last = beta;
            if (filled < dim) {
                basis.col(j + 1) = w;
                filled = std::max(filled, j + 2);
            }
            ++j;
        }

        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
        const Eigen::VectorXd& theta = eig.eigenvalues();
        const Eigen::MatrixXd& y = eig.eigenvectors();
        const double scale = std::max({std::abs(theta(0)), std::abs(theta(m - 1)), 1e-300});

        bool converged = true;
        std::vector<double> residuals(static_cast<std::size_t>(nev));
        for (Eigen::Index i = 0; i < nev; ++i) {
            residuals[static_cast<std::size_t>(i)] = std::abs(beta_last * y(m - 1, i));
            if (residuals[static_cast<std::size_t>(i)] > options.tol * scale) converged = false;
        }

        const bool done = converged || out.matvecs >= options.max_matvecs || m == dim;
        const Eigen::Index keep = done ? nev : std::min(m - 1, nev + (m - nev) / 3);
        const Eigen::MatrixXd ritz = basis.leftCols(m) * y.leftCols(keep);

        if (done) {
            out.converged = converged || m == dim;
            for (Eigen::Index i = 0; i < nev; ++i) {
                out.values.push_back(theta(i));
                const Eigen::VectorXd v = ritz.col(i).normalized();
                out.vectors.emplace_back(v.data(), v.data() + dim);
                out.residuals.push_back(m == dim ? 0.0 : residuals[static_cast<std::size_t>(i)]);
            }
            return out;
        }

        // Thick restart: [ritz_0 .. ritz_{keep-1}, residual direction].
        basis.col(keep) = basis.col(m);
        basis.leftCols(keep) = ritz;
        filled = keep + 1;
        t.setZero();
        for (Eigen::Index i = 0; i < keep; ++i) t(i, i) = theta(i);
        j = keep;
    }
}

EigenPairs lowest_eigenpairs_davidson(std::span<const double> diagonal, const RealOperator& op,
                                      const LanczosOptions& options) {
    const auto dim = static_cast<Eigen::Index>(diagonal.size());
    if (dim == 0) throw ParameterError("eigensolver needs a non-empty space");
    const Eigen::Index nev = std::min<Eigen::Index>(std::max(options.nev, 1), dim);
    const Eigen::Index max_dim = std::min<Eigen::Index>(std::max<Eigen::Index>(options.krylov_dim, 3 * nev + 2), dim);
    const Eigen::Map<const Eigen::VectorXd> diag(diagonal.data(), dim);

    Basis v(dim, max_dim);
    Basis av(dim, max_dim);
    // Projected operator V^T A V, grown one row and column per new vector.
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(max_dim, max_dim);
    Eigen::Index size = 0;
    EigenPairs out;

    auto push = [&](Eigen::VectorXd w) {
        orthogonalize(v, size, w);
        const double n = w.norm();
        if (n < 1e-10) return false;
        v.col(size) = w / n;
        op(std::span<const double>(v.col(size).data(), diagonal.size()),
           std::span<double>(av.col(size).data(), diagonal.size()));
        ++out.matvecs;
        const Eigen::VectorXd col = v.leftCols(size + 1).transpose() * av.col(size);
        proj.col(size).head(size + 1) = col;
        proj.row(size).head(size + 1) = col.transpose();
        ++size;
        return true;
    };

    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) order[static_cast<std::size_t>(i)] = i;
    std::partial_sort(order.begin(), order.begin() + nev, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) { return diag(a) < diag(b); });
    for (Eigen::Index i = 0; i < nev; ++i) push(Eigen::VectorXd::Unit(dim, order[static_cast<std::size_t>(i)]));
    std::mt19937_64 rng(options.seed);
    if (size < max_dim) push(random_unit(dim, rng));

    while (true) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(proj.topLeftCorner(size, size));
        const Eigen::VectorXd& theta = eig.eigenvalues();
        const Eigen::Index nk = std::min(nev, size);
        const Eigen::MatrixXd y = eig.eigenvectors().leftCols(nk);
        const Eigen::MatrixXd x = v.leftCols(size) * y;
        const Eigen::MatrixXd r = av.leftCols(size) * y - x * theta.head(nk).asDiagonal();
        const double scale = std::max({std::abs(theta(0)), std::abs(theta(size - 1)), 1e-300});

        std::vector<double> residuals(static_cast<std::size_t>(nk));
        bool converged = nk == nev;
        for (Eigen::Index i = 0; i < nk; ++i) {
            residuals[static_cast<std::size_t>(i)] = r.col(i).norm();
            if (residuals[static_cast<std::size_t>(i)] > options.tol * scale) converged = false;
        }
        if (converged || out.matvecs >= options.max_matvecs || size == dim) {
            out.converged = converged || size == dim;
            for (Eigen::Index i = 0; i < nk; ++i) {
                out.values.push_back(theta(i));
                const Eigen::VectorXd xi = x.col(i).normalized();
                out.vectors.emplace_back(xi.data(), xi.data() + dim);
                out.residuals.push_back(size == dim ? 0.0 : residuals[static_cast<std::size_t>(i)]);
            }
            return out;
        }

        if (size + nev > max_dim) {
            const Eigen::Index keep = std::min(size, std::max(2 * nev, max_dim / 3));
            const Eigen::MatrixXd yk = eig.eigenvectors().leftCols(keep);
            const Eigen::MatrixXd vk = v.leftCols(size) * yk;
            const Eigen::MatrixXd wk = av.leftCols(size) * yk;
            v.leftCols(keep) = vk;
            av.leftCols(keep) = wk;
            proj.setZero();
            proj.topLeftCorner(keep, keep) = theta.head(keep).asDiagonal();
            size = keep;
        }

        bool grew = false;
        for (Eigen::Index i = 0; i < nk; ++i) {
            if (residuals[static_cast<std::size_t>(i)] <= options.tol * scale) continue;
            Eigen::ArrayXd denom = diag.array() - theta(i);
            denom = denom.unaryExpr([](double d) { return std::abs(d) < 1e-8 ? (d < 0 ? -1e-8 : 1e-8) : d; });
            const Eigen::ArrayXd mx = x.col(i).array() / denom;
            const Eigen::ArrayXd mr = r.col(i).array() / denom;
            const double eps = (x.col(i).array() * mr).sum() / (x.col(i).array() * mx).sum();
            if (size < max_dim && push((mr - eps * mx).matrix())) grew = true;
        }
        if (!grew) {
            if (size >= max_dim || !push(random_unit(dim, rng))) {
                throw NumericalError("davidson: search space stagnated");
            }
        }
    }
}

}  // namespace rydladder
