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

#include "rydladder/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace rydladder {

double interpolate(const std::vector<Breakpoint>& points, double t) {
    if (points.empty()) throw ParameterError("interpolate: no breakpoints");
    if (t <= points.front().t) return points.front().value;
    if (t >= points.back().t) return points.back().value;
    const auto hi = std::upper_bound(points.begin(), points.end(), t,
                                     [](double v, const Breakpoint& b) { return v < b.t; });
    const auto lo = std::prev(hi);
    const double frac = (t - lo->t) / (hi->t - lo->t);
    return lo->value + frac * (hi->value - lo->value);
}

double RampSchedule::omega(double t) const { return interpolate(omega_points, t); }
double RampSchedule::delta(double t) const { return interpolate(delta_points, t); }

void RampSchedule::validate() const {
    if (!(t_final > 0.0)) throw ParameterError("schedule: t_final must be positive");
    for (const auto* pts : {&omega_points, &delta_points}) {
        if (pts->size() < 2) throw ParameterError("schedule: need at least 2 breakpoints per profile");
        if (pts->front().t != 0.0) throw ParameterError("schedule: first breakpoint must be at t = 0");
        if (std::abs(pts->back().t - t_final) > 1e-12 * t_final) {
            throw ParameterError("schedule: last breakpoint must be at t_final");
        }
        for (std::size_t i = 1; i < pts->size(); ++i) {
            if (!((*pts)[i].t > (*pts)[i - 1].t)) throw ParameterError("schedule: breakpoints must increase strictly");
        }
        for (const auto& b : *pts) {
            if (!std::isfinite(b.value)) throw ParameterError("schedule: non-finite breakpoint value");
        }
    }
}

std::string_view schedule_name(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::ramp4us: return "ramp4us";
        case ScheduleKind::ramp4us_modified: return "ramp4us_modified";
        case ScheduleKind::ramp12us: return "ramp12us";
    }
    return "unknown";
}

ScheduleKind parse_schedule(std::string_view name) {
    for (auto k : {ScheduleKind::ramp4us, ScheduleKind::ramp4us_modified, ScheduleKind::ramp12us}) {
        if (schedule_name(k) == name) return k;
    }
    throw ParameterError("unknown schedule '" + std::string(name) + "'");
}

RampSchedule schedule_standard(ScheduleKind kind, double omega_max, double delta_max) {
    if (!(omega_max > 0.0) || !(delta_max > 0.0)) throw ParameterError("schedule: maxima must be positive");
    RampSchedule s;
    switch (kind) {
        case ScheduleKind::ramp4us:
            s.t_final = 4.0;
            s.omega_points = {{0.0, 0.0}, {0.5, omega_max}, {3.95, omega_max}, {4.0, 0.0}};
            s.delta_points = {{0.0, -delta_max}, {0.5, -delta_max}, {3.95, delta_max}, {4.0, delta_max}};
            break;
        case ScheduleKind::ramp4us_modified:
            s.t_final = 4.0;
            s.omega_points = {{0.0, 0.0}, {1.0, omega_max}, {3.95, omega_max}, {4.0, 0.0}};
            s.delta_points = {{0.0, -delta_max / 2}, {1.0, -delta_max / 2}, {3.95, delta_max}, {4.0, delta_max}};
            break;
        case ScheduleKind::ramp12us:
            s.t_final = 12.0;
            s.omega_points = {{0.0, 0.0}, {0.5, omega_max}, {11.95, omega_max}, {12.0, 0.0}};
            s.delta_points = {{0.0, -delta_max}, {0.5, -delta_max}, {11.95, delta_max}, {12.0, delta_max}};
            break;
    }
    return s;
}

void apply_rabi_rotation(PureState& psi, int atom, double angle) {
    if (atom < 0 || atom >= psi.n_atoms) throw ParameterError("rabi rotation: atom out of range");
    if (angle == 0.0) return;
    const Complex c(std::cos(angle), 0.0);
    const Complex s(0.0, -std::sin(angle));
    const std::size_t bit = std::size_t{1} << atom;
    auto& amp = psi.amplitudes;
    for (std::size_t hi = 0; hi < amp.size(); hi += 2 * bit) {
        for (std::size_t b = hi; b < hi + bit; ++b) {
            const Complex a0 = amp[b];
            const Complex a1 = amp[b | bit];
            amp[b] = c * a0 + s * a1;
            amp[b | bit] = c * a1 + s * a0;
        }
    }
}

void apply_rabi_rotations(PureState& psi, double angle) {
    for (int k = 0; k < psi.n_atoms; ++k) apply_rabi_rotation(psi, k, angle);
}

void apply_diagonal_phase(PureState& psi, const Hamiltonian& h, double dt) {
    if (psi.dim() != h.dim()) throw ParameterError("diagonal phase: dimension mismatch");
    for (std::size_t b = 0; b < psi.dim(); ++b) {
        const double phi = -h.diagonal(b) * dt;
        psi.amplitudes[b] *= Complex(std::cos(phi), std::sin(phi));
    }
}

namespace {

double ground_manifold_weight(const Hamiltonian& h, const PureState& psi, double gap) {
    double e0 = h.diagonal(0);
    for (std::size_t b = 1; b < psi.dim(); ++b) e0 = std::min(e0, h.diagonal(b));
    double w = 0.0;
    for (std::size_t b = 0; b < psi.dim(); ++b) {
        if (h.diagonal(b) - e0 < gap) w += std::norm(psi.amplitudes[b]);
    }
    return w;
}

}  // namespace

EvolutionResult trotter_evolve(const LadderSystem& tmpl, const RampSchedule& sched, double dt, PureState psi0,
                               int checkpoint_every, const GroundStateOptions& gs_options) {
    sched.validate();
    if (!(dt > 0.0)) throw ParameterError("trotter: dt must be positive");
    const double ratio = sched.t_final / dt;
    const auto steps = static_cast<int>(std::llround(ratio));
    if (steps < 1 || std::abs(ratio - steps) > 1e-6) throw ParameterError("trotter: dt must divide t_final");
    if (psi0.n_atoms != tmpl.n_atoms()) throw ParameterError("trotter: initial state has the wrong size");
    if (std::abs(psi0.norm() - 1.0) > 1e-8) throw ParameterError("trotter: initial state is not normalized");

    const Hamiltonian base(tmpl);
    EvolutionResult out;
    out.dt = dt;
    out.steps = steps;
    out.psi_final = std::move(psi0);
    auto record = [&](int step) {
        Checkpoint cp;
        cp.t = step * dt;
        try {
            const Hamiltonian h = base.with_drive(sched.omega(cp.t), sched.delta(cp.t));
            cp.fidelity = h.omega() == 0.0 ? ground_manifold_weight(h, out.psi_final, gs_options.degeneracy_gap)
                                           : fidelity(ground_state(h, gs_options).psi, out.psi_final);
        } catch (const NumericalError& e) {
            cp.ok = false;
            cp.fidelity = std::nan("");
            cp.error = e.what();
        }
        out.checkpoints.push_back(std::move(cp));
    };

    if (checkpoint_every > 0) record(0);
    for (int j = 0; j < steps; ++j) {
        const double t = j * dt;
        apply_diagonal_phase(out.psi_final, base.with_drive(0.0, sched.delta(t)), dt);
        apply_rabi_rotations(out.psi_final, sched.omega(t) * dt / 2.0);
        const int done = j + 1;
        if (checkpoint_every > 0 && (done % checkpoint_every == 0 || done == steps)) record(done);
    }
    return out;
}

PureState rampdown_evolve(const LadderSystem& sys, const PureState& psi_gs, double ramp_time, double dt) {
    if (!(ramp_time >= 0.0)) throw ParameterError("rampdown: ramp time must be nonnegative");
    if (!(dt > 0.0)) throw ParameterError("rampdown: dt must be positive");
    if (psi_gs.n_atoms != sys.n_atoms()) throw ParameterError("rampdown: state has the wrong size");
    PureState psi = psi_gs;
    if (ramp_time == 0.0) return psi;
    const auto steps = static_cast<int>(std::ceil(ramp_time / dt - 1e-9));
    const double h = ramp_time / steps;
    const Hamiltonian diag = Hamiltonian(sys).with_drive(0.0, sys.delta);
    for (int j = 0; j < steps; ++j) {
        const double omega = sys.omega * (1.0 - j * h / ramp_time);
        apply_diagonal_phase(psi, diag, h);
        apply_rabi_rotations(psi, omega * h / 2.0);
    }
    return psi;
}

}  // namespace rydladder
