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
#include <vector>

#include "rydladder/common.hpp"
#include "rydladder/state.hpp"

namespace rydladder {

// Units: lengths in um, times in us, frequencies and energies in rad/us.

/// Reference drive used to back out the default van der Waals constant:
/// Omega = 2pi * 1.078224 rad/us at R_b = 2.35 * 4.1 um.
inline constexpr double kReferenceOmega = kTwoPi * 1.078224;
inline constexpr double kReferenceSpacing = 4.1;
inline constexpr double kReferenceRbOverA = 2.35;
inline constexpr double kReferenceDeltaOverOmega = 3.5;

/// Default C6 in rad um^6 / us, chosen so that Omega R_b^6 reproduces the
/// reference drive above.
double default_c6();

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// Two-leg ladder of Rydberg atoms. Atom k = 2 * rung + leg sits at
/// (rung * a, leg * aspect_ratio * a).
struct LadderSystem {
    int n_rungs = 2;
    double a = kReferenceSpacing;
    double aspect_ratio = 2.0;
    double omega = 0.0;
    double delta = 0.0;
    double c6 = 0.0;
    /// Pairs farther apart than this are dropped; <= 0 keeps every pair.
    double cutoff_radius = 0.0;

    int n_atoms() const { return 2 * n_rungs; }
    /// (c6 / omega)^(1/6); infinite when omega == 0.
    double blockade_radius() const;
    Position position(int atom) const;
    double distance(int i, int j) const;

    /// Throws ParameterError when an invariant is violated.
    void validate() const;
};

/// Builds a ladder with Omega fixed by the requested blockade ratio:
/// omega = c6 / (rb_over_a * a)^6 and delta = delta_over_omega * omega.
LadderSystem build_system(int n_rungs, double a, double rb_over_a, double delta_over_omega,
                          double c6 = default_c6());

/// Dense symmetric table of pair couplings V_ij = c6 / r_ij^6 (zero diagonal).
class InteractionTable {
  public:
    explicit InteractionTable(int n_atoms) : n_(n_atoms), v_(static_cast<std::size_t>(n_atoms) * n_atoms, 0.0) {}

    int n_atoms() const { return n_; }
    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double value) {
        v_[static_cast<std::size_t>(i) * n_ + j] = value;
        v_[static_cast<std::size_t>(j) * n_ + i] = value;
    }

  private:
    int n_;
    std::vector<double> v_;
};

InteractionTable interaction_table(const LadderSystem& sys);

/// Matrix-free form of
///   H = (Omega/2) sum_i sigma_x^i - Delta sum_i n_i + sum_{i<j} V_ij n_i n_j.
/// The interaction energy and occupation number of every basis state are
/// cached, so the drive parameters can be swapped without recomputing them.
class Hamiltonian {
  public:
    explicit Hamiltonian(const LadderSystem& sys);

    int n_atoms() const { return n_atoms_; }
    std::size_t dim() const { return interaction_.size(); }
    double omega() const { return omega_; }
    double delta() const { return delta_; }

    /// Same geometry and couplings, different drive.
    Hamiltonian with_drive(double omega, double delta) const;

    std::span<const double> interaction_energies() const { return interaction_; }
    std::span<const std::uint8_t> occupations() const { return occupation_; }
    double diagonal(std::size_t basis) const { return interaction_[basis] - delta_ * occupation_[basis]; }

    void apply(std::span<const Complex> in, std::span<Complex> out) const;
    void apply(std::span<const double> in, std::span<double> out) const;

  private:
    Hamiltonian() = default;

    int n_atoms_ = 0;
    double omega_ = 0.0;
    double delta_ = 0.0;
    std::vector<double> interaction_;
    std::vector<std::uint8_t> occupation_;
};

PureState apply_hamiltonian(const LadderSystem& sys, const PureState& psi);

}  // namespace rydladder
