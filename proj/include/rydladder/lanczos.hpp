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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rydladder {

using RealOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct LanczosOptions {
    int nev = 2;
    int krylov_dim = 40;
    long max_matvecs = 20000;
    /// Converged when ||A u - theta u|| <= tol * max|theta|.
    double tol = 1e-10;
    std::uint64_t seed = 0x5eed1234abcdULL;
};

struct EigenPairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    std::vector<double> residuals;
    long matvecs = 0;
    bool converged = false;
};

/// Thick-restart Lanczos with full (two-pass) reorthogonalization for the
/// lowest `nev` eigenpairs of a real symmetric operator. Invariant-subspace
/// breakdowns are continued with a fresh random direction, so degenerate
/// levels reachable from the start vector are not silently skipped.
EigenPairs lowest_eigenpairs(std::size_t dim, const RealOperator& op, const LanczosOptions& options);

/// Block Davidson with the Olsen-corrected diagonal preconditioner and full
/// (two-pass) orthogonalization of the search space. Starts from the
/// `nev` smallest diagonal entries plus one seeded random vector.
/// `krylov_dim` bounds the search space before a thick restart.
EigenPairs lowest_eigenpairs_davidson(std::span<const double> diagonal, const RealOperator& op,
                                      const LanczosOptions& options);

}  // namespace rydladder
