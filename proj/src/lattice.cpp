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

#include "rydladder/lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rydladder {

double default_c6() {
    const double rb = kReferenceRbOverA * kReferenceSpacing;
    return kReferenceOmega * std::pow(rb, 6);
}

double LadderSystem::blockade_radius() const {
    if (omega <= 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(c6 / omega, 1.0 / 6.0);
}

Position LadderSystem::position(int atom) const {
    const int rung = atom / 2;
    const int leg = atom % 2;
    return {rung * a, leg * aspect_ratio * a};
}

double LadderSystem::distance(int i, int j) const {
    const Position p = position(i);
    const Position q = position(j);
    return std::hypot(p.x - q.x, p.y - q.y);
}

void LadderSystem::validate() const {
    if (n_rungs < 1) throw ParameterError("n_rungs must be >= 1, got " + std::to_string(n_rungs));
    if (n_atoms() > 62) throw ParameterError("at most 31 rungs fit in a 64-bit basis label");
    if (!(a > 0.0)) throw ParameterError("lattice spacing a must be positive");
    if (!(aspect_ratio > 0.0)) throw ParameterError("aspect_ratio must be positive");
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw ParameterError("omega must be finite and >= 0");
    if (!std::isfinite(delta)) throw ParameterError("delta must be finite");
    if (!(c6 > 0.0)) throw ParameterError("c6 must be positive");
}

LadderSystem build_system(int n_rungs, double a, double rb_over_a, double delta_over_omega, double c6) {
    if (!(a > 0.0)) throw ParameterError("lattice spacing a must be positive");
    if (!(c6 > 0.0)) throw ParameterError("c6 must be positive");
    if (!(rb_over_a >= 1.0)) throw ParameterError("rb_over_a must be >= 1");
    if (!std::isfinite(delta_over_omega)) throw ParameterError("delta_over_omega must be finite");
    LadderSystem sys;
    sys.n_rungs = n_rungs;
    sys.a = a;
    sys.c6 = c6;
    sys.omega = c6 / std::pow(rb_over_a * a, 6);
    sys.delta = delta_over_omega * sys.omega;
    sys.validate();
    return sys;
}

InteractionTable interaction_table(const LadderSystem& sys) {
    sys.validate();
    const int n = sys.n_atoms();
    InteractionTable table(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double r = sys.distance(i, j);
            if (sys.cutoff_radius > 0.0 && r > sys.cutoff_radius) continue;
            table.set(i, j, sys.c6 / std::pow(r, 6));
        }
    }
    return table;
}

Hamiltonian::Hamiltonian(const LadderSystem& sys) : n_atoms_(sys.n_atoms()), omega_(sys.omega), delta_(sys.delta) {
    if (n_atoms_ > 30) throw ParameterError("state vectors beyond 30 atoms are not supported");
    const InteractionTable v = interaction_table(sys);
    const std::size_t dim = std::size_t{1} << n_atoms_;
    interaction_.assign(dim, 0.0);
    occupation_.assign(dim, 0);
    // E(b) = E(b without its top atom h) + sum_{j in rest} V_hj
    for (std::size_t b = 1; b < dim; ++b) {
        const int h = std::bit_width(b) - 1;
        const std::size_t rest = b ^ (std::size_t{1} << h);
        double e = interaction_[rest];
        for (std::size_t r = rest; r != 0; r &= r - 1) e += v(h, std::countr_zero(r));
        interaction_[b] = e;
        occupation_[b] = static_cast<std::uint8_t>(occupation_[rest] + 1);
    }
}

Hamiltonian Hamiltonian::with_drive(double omega, double delta) const {
    Hamiltonian h;
    h.n_atoms_ = n_atoms_;
    h.omega_ = omega;
    h.delta_ = delta;
    h.interaction_ = interaction_;
    h.occupation_ = occupation_;
    return h;
}

namespace {

template <typename T>
void apply_impl(const Hamiltonian& h, std::span<const T> in, std::span<T> out) {
    if (in.size() != h.dim() || out.size() != h.dim()) {
        throw ParameterError("state dimension does not match the Hamiltonian");
    }
    const std::size_t dim = h.dim();
    for (std::size_t b = 0; b < dim; ++b) out[b] = h.diagonal(b) * in[b];
    const double half = 0.5 * h.omega();
    if (half == 0.0) return;
    for (int k = 0; k < h.n_atoms(); ++k) {
        const std::size_t bit = std::size_t{1} << k;
        for (std::size_t lo = 0; lo < dim; lo += 2 * bit) {
            T* __restrict o = out.data() + lo;
            const T* __restrict x = in.data() + lo;
            for (std::size_t b = 0; b < bit; ++b) {
                o[b] += half * x[b + bit];
                o[b + bit] += half * x[b];
            }
        }
    }
}

}  // namespace

void Hamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const { apply_impl(*this, in, out); }
void Hamiltonian::apply(std::span<const double> in, std::span<double> out) const { apply_impl(*this, in, out); }

PureState apply_hamiltonian(const LadderSystem& sys, const PureState& psi) {
    if (psi.n_atoms != sys.n_atoms() || psi.dim() != (std::size_t{1} << sys.n_atoms())) {
        throw ParameterError("state dimension does not match the ladder");
    }
    const Hamiltonian h(sys);
    PureState out(psi.n_atoms);
    h.apply(std::span<const Complex>(psi.amplitudes), std::span<Complex>(out.amplitudes));
    return out;
}

}  // namespace rydladder
