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
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rydladder/lattice.hpp"
#include "rydladder/state.hpp"

namespace rydladder {

class Partition;

struct GroundStateOptions {
    double tol = 1e-10;
    int krylov_dim = 24;
    long max_matvecs = 20000;
    int max_atoms = 24;
    std::uint64_t seed = 0x5eed1234abcdULL;
    /// Lowest two levels closer than this are reported as degenerate.
    double degeneracy_gap = 1e-8;
};

struct GroundState {
    double energy = 0.0;
    double first_excited = 0.0;
    double residual = 0.0;
    long matvecs = 0;
    PureState psi;
};

class ConvergenceError : public NumericalError {
  public:
    ConvergenceError(const std::string& what, double residual) : NumericalError(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

class DegenerateGroundStateError : public NumericalError {
  public:
    DegenerateGroundStateError(double e0, double e1);
    double e0() const { return e0_; }
    double e1() const { return e1_; }

  private:
    double e0_;
    double e1_;
};

/// Lowest eigenpair of the ladder Hamiltonian. The global phase is fixed so
/// the largest-magnitude amplitude is real and positive.
GroundState ground_state(const Hamiltonian& h, const GroundStateOptions& options = {});
GroundState ground_state(const LadderSystem& sys, const GroundStateOptions& options = {});

struct ReducedDensityMatrix {
    /// Atoms kept, in increasing order; row index bit i is atom atoms[i].
    std::vector<int> atoms;
    Eigen::MatrixXcd rho;
};

/// rho_region = Tr_complement |psi><psi|, region given as a bit mask of atoms.
ReducedDensityMatrix reduced_density_matrix(const PureState& psi, Bits region_mask);
ReducedDensityMatrix reduced_density_matrix(const PureState& psi, const Partition& part, std::string_view labels);

/// -sum lambda ln lambda in nats; eigenvalues <= 1e-14 contribute zero.
double von_neumann_entropy(const ReducedDensityMatrix& rho);

/// Entanglement entropy of a region, evaluated on whichever side of the cut
/// has the smaller reduced density matrix.
double entanglement_entropy(const PureState& psi, Bits region_mask);

enum class Observable {
    svn_half,
    mi_half,
    ratio_half,
    weak_vn,
    weak_mi,
    weak_ratio,
};

std::string_view observable_name(Observable obs);
Observable parse_observable(std::string_view name);

struct ScanGrid {
    double delta_lo = 0.0;
    double delta_hi = 5.0;
    int n_delta = 11;
    double rb_lo = 1.0;
    double rb_hi = 3.5;
    int n_rb = 11;

    std::vector<double> delta_axis() const;
    std::vector<double> rb_axis() const;
};

struct ScanTemplate {
    int n_rungs = 5;
    double a = kReferenceSpacing;
    double aspect_ratio = 2.0;
    double c6 = default_c6();
    /// Per-atom labels for the weak-monotonicity observables; empty means
    /// the half-cut pattern only.
    std::string four_region_labels;
};

struct Heatmap {
    std::vector<double> delta_axis;
    std::vector<double> rb_axis;
    /// values[obs][i_delta][i_rb]; NaN where the point failed.
    std::map<Observable, std::vector<std::vector<double>>> values;
    /// Human-readable failures, one per flagged grid point.
    std::vector<std::string> flagged;
};

Heatmap scan_heatmap(const ScanGrid& grid, const ScanTemplate& tmpl, const std::vector<Observable>& observables,
                     const GroundStateOptions& options = {}, int threads = 1);

/// Header row of rb_over_a values, first column delta_over_omega.
void write_heatmap_csv(std::ostream& os, const Heatmap& map, Observable obs);

}  // namespace rydladder
