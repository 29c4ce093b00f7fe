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

#include "rydladder/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "rydladder/common.hpp"

namespace rydladder {
namespace {

double r_squared(std::span<const double> y, std::span<const double> fitted) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_tot += (y[i] - mean) * (y[i] - mean);
        ss_res += (y[i] - fitted[i]) * (y[i] - fitted[i]);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return 1.0 - ss_res / ss_tot;
}

}  // namespace

LinearFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("ols: x and y differ in length");
    if (x.size() < 2) throw NumericalError("ols: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericalError("ols: abscissae are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    std::vector<double> fitted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fitted[i] = fit.intercept + fit.slope * x[i];
    fit.r2 = r_squared(y, fitted);
    return fit;
}

LinearFit ols_through_origin(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("ols: x and y differ in length");
    if (x.empty()) throw NumericalError("ols: no points");
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    if (sxx == 0.0) throw NumericalError("ols: abscissae are all zero");
    LinearFit fit;
    fit.slope = sxy / sxx;
    std::vector<double> fitted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fitted[i] = fit.slope * x[i];
    fit.r2 = r_squared(y, fitted);
    return fit;
}

CurveFitResult levenberg_marquardt(const ScalarModel& model, std::span<const double> x, std::span<const double> y,
                                   Eigen::VectorXd start, const CurveFitOptions& options) {
    const auto n_params = start.size();
    const auto n = static_cast<Eigen::Index>(x.size());
    const bool bounded = options.lower.size() == n_params && options.upper.size() == n_params;
    auto project = [&](Eigen::VectorXd& p) {
        if (!bounded) return;
        p = p.cwiseMax(options.lower).cwiseMin(options.upper);
    };

    auto residuals = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) r(i) = model(x[static_cast<std::size_t>(i)], p) - y[static_cast<std::size_t>(i)];
        return r;
    };

    CurveFitResult result;
    Eigen::VectorXd p = std::move(start);
    project(p);
    Eigen::VectorXd r = residuals(p);
    double rss = r.squaredNorm();
    double lambda = 1e-3;

    for (int it = 0; it < options.max_iterations; ++it) {
        result.iterations = it + 1;
        Eigen::MatrixXd jac(n, n_params);
        for (Eigen::Index k = 0; k < n_params; ++k) {
            Eigen::VectorXd q = p;
            const double h = 1e-7 * std::max(1.0, std::abs(p(k)));
            q(k) += h;
            jac.col(k) = (residuals(q) - r) / h;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;

        bool improved = false;
        while (lambda < 1e12) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
            Eigen::VectorXd step = a.ldlt().solve(-grad);
            Eigen::VectorXd candidate = p + step;
            project(candidate);
            const Eigen::VectorXd rc = residuals(candidate);
            const double rss_c = rc.squaredNorm();
            if (std::isfinite(rss_c) && rss_c < rss) {
                const double rel = (rss - rss_c) / std::max(rss, 1e-300);
                const double step_norm = (candidate - p).norm();
                p = candidate;
                r = rc;
                rss = rss_c;
                lambda = std::max(lambda / 10.0, 1e-15);
                improved = true;
                if (rel < options.tol || step_norm < options.tol * (1.0 + p.norm())) {
                    result.converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) {
            // No descent direction left: a (possibly boundary) minimum.
            result.converged = true;
        }
        if (result.converged) break;
    }
    result.params = p;
    result.rss = rss;
    return result;
}

}  // namespace rydladder
