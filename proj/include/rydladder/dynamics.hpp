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

#include <string>
#include <string_view>
#include <vector>

#include "rydladder/lattice.hpp"
#include "rydladder/spectrum.hpp"
#include "rydladder/state.hpp"

namespace rydladder {

struct Breakpoint {
    double t = 0.0;
    double value = 0.0;
};

/// Piecewise-linear drive profile Omega(t) and Delta(t), rad/us against us.
struct RampSchedule {
    std::vector<Breakpoint> omega_points;
    std::vector<Breakpoint> delta_points;
    double t_final = 0.0;

    double omega(double t) const;
    double delta(double t) const;

    /// Breakpoints strictly increasing, starting at 0 and ending at t_final.
    void validate() const;
};

/// Linear interpolation, clamped to the end values outside the breakpoints.
double interpolate(const std::vector<Breakpoint>& points, double t);

enum class ScheduleKind { ramp4us, ramp4us_modified, ramp12us };

std::string_view schedule_name(ScheduleKind kind);
ScheduleKind parse_schedule(std::string_view name);

RampSchedule schedule_standard(ScheduleKind kind, double omega_max, double delta_max);

/// exp(-i angle sigma_x) on one atom.
void apply_rabi_rotation(PureState& psi, int atom, double angle);

/// exp(-i angle sum_k sigma_x^k), atoms taken in increasing order.
void apply_rabi_rotations(PureState& psi, double angle);

/// exp(-i H_diag dt) for the diagonal part of `h`.
void apply_diagonal_phase(PureState& psi, const Hamiltonian& h, double dt);

struct Checkpoint {
    double t = 0.0;
    double fidelity = 0.0;
    /// False when the instantaneous ground state could not be computed.
    bool ok = true;
    std::string error;
};

struct EvolutionResult {
    PureState psi_final;
    std::vector<Checkpoint> checkpoints;
    double dt = 0.0;
    int steps = 0;
};

/// First-order Trotter evolution under the schedule. Each step at t_j applies
/// the diagonal phase of H(t_j) and then the Rabi rotations with angle
/// Omega(t_j) dt / 2. Checkpoints every `checkpoint_every` steps and at the
/// end record the fidelity to the ground state of H(t); with Omega(t) = 0
/// this is the weight on the lowest diagonal level, degenerate or not.
EvolutionResult trotter_evolve(const LadderSystem& tmpl, const RampSchedule& sched, double dt, PureState psi0,
                               int checkpoint_every = 25, const GroundStateOptions& gs_options = {});

/// Ramps Omega linearly from sys.omega to 0 over `ramp_time` with Delta and
/// V held, using ceil(ramp_time / dt) equal steps.
PureState rampdown_evolve(const LadderSystem& sys, const PureState& psi_gs, double ramp_time, double dt);

}  // namespace rydladder
