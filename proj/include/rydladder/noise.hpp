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
#include <span>
#include <utility>
#include <vector>

#include "rydladder/dist.hpp"

namespace rydladder {

/// Independent per-atom readout errors.
struct ReadoutModel {
    /// Ground state read as Rydberg.
    double p01 = 0.01;
    /// Rydberg state read as ground.
    double p10 = 0.08;

    /// Rates in [0, 0.5), as needed for inversion.
    void validate() const;
    /// Rates in [0, 1], enough for forward simulation.
    void validate_channel() const;
    /// P(read | truth) for one atom.
    double confusion(int read, int truth) const;
};

/// One hardware shot: loading pattern and measured pattern, one entry per atom.
struct ShotRecord {
    std::vector<std::uint8_t> pre_sequence;
    std::vector<std::uint8_t> post_sequence;
};

/// Mitigated weights over the observed support. Weights may be negative.
struct QuasiDist {
    int n_atoms = 0;
    std::vector<ProbEntry> entries;
    std::uint64_t n_shots = 0;
    /// Final relative residual of the linear solve.
    double residual = 0.0;
    int iterations = 0;

    double sum() const;
    /// Total weight of the negative entries, as a positive number.
    double clipped_mass() const;
    /// Negatives set to zero and the rest renormalized.
    ProbDist clipped() const;
};

/// Flips every bit of every shot independently (0->1 with p01, 1->0 with p10).
CountTable apply_readout_noise(const CountTable& counts, const ReadoutModel& model, std::uint64_t seed);

/// Exact action of the readout channel on a distribution; the output keeps
/// every reachable string with nonzero weight. Limited to 24 atoms.
ProbDist apply_readout_channel(const ProbDist& p, const ReadoutModel& model);

struct M3Options {
    double tol = 1e-8;
    int max_iterations = 1000;
    int restart = 50;
};

class SolverError : public NumericalError {
  public:
    SolverError(const std::string& what, double residual) : NumericalError(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

/// Solves A x = p_noisy where A is the assignment matrix restricted to the
/// observed strings, each column rescaled to sum to one over that set.
/// Matrix-free GMRES with Jacobi preconditioning.
QuasiDist m3_mitigate(const ProbDist& noisy, const ReadoutModel& model, const M3Options& options = {});
QuasiDist m3_mitigate(const CountTable& counts, const ReadoutModel& model, const M3Options& options = {});

/// (1 - p10)^n_R (1 - p01)^(n_atoms - n_R) with n_R = popcount(bits).
double depletion_factor(Bits bits, int n_atoms, const ReadoutModel& model);

/// Count / depletion factor per string, renormalized.
ProbDist depletion_mitigate(const CountTable& counts, const ReadoutModel& model);

struct PostSelection {
    CountTable counts;
    std::uint64_t kept = 0;
    std::uint64_t total = 0;
    double sorting_fidelity = 0.0;
};

/// Keeps shots whose pre-sequence is all ones. With `invert_post_sequence`
/// a post-sequence 0 means a Rydberg atom (occupation 1).
PostSelection postselect(std::span<const ShotRecord> shots, bool invert_post_sequence);

struct SortingFidelityFit {
    /// Per-atom success rate.
    double f = 0.0;
    /// ln F at zero atoms; zero when fitted through the origin.
    double intercept = 0.0;
    double r2 = 0.0;
    int n_points = 0;

    double keep_fraction(int n_atoms) const;
};

/// Least squares of ln F against n_atoms. The default model F = f^N has no
/// intercept.
SortingFidelityFit sorting_fidelity_fit(std::span<const std::pair<int, double>> series, bool through_origin = true);

}  // namespace rydladder
