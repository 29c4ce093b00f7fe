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
#include <functional>
#include <span>

namespace rydladder {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x. Needs >= 2 distinct x.
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Least squares through the origin, y = slope x.
LinearFit ols_through_origin(std::span<const double> x, std::span<const double> y);

struct CurveFitResult {
    Eigen::VectorXd params;
    double rss = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// model(x, params) -> y; jacobian filled by forward differences.
using ScalarModel = std::function<double(double, const Eigen::VectorXd&)>;

struct CurveFitOptions {
    int max_iterations = 500;
    double tol = 1e-12;
    /// Optional per-parameter box; empty means unbounded.
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

/// Projected Levenberg-Marquardt least squares.
CurveFitResult levenberg_marquardt(const ScalarModel& model, std::span<const double> x, std::span<const double> y,
                                   Eigen::VectorXd start, const CurveFitOptions& options = {});

}  // namespace rydladder
