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

#include <cmath>
#include <vector>

#include "rydladder/common.hpp"

namespace rydladder {

/// State vector over the 2^n_atoms occupation basis.
struct PureState {
    int n_atoms = 0;
    std::vector<Complex> amplitudes;

    PureState() = default;
    explicit PureState(int n) : n_atoms(n), amplitudes(std::size_t{1} << n) {}

    static PureState basis(int n, Bits bits) {
        PureState s(n);
        s.amplitudes.at(bits) = 1.0;
        return s;
    }

    std::size_t dim() const { return amplitudes.size(); }

    double norm() const {
        double acc = 0.0;
        for (const auto& c : amplitudes) acc += std::norm(c);
        return std::sqrt(acc);
    }

    void normalize() {
        const double n = norm();
        if (n == 0.0) throw NumericalError("cannot normalize a zero state");
        for (auto& c : amplitudes) c /= n;
    }
};

inline Complex inner(const PureState& a, const PureState& b) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return acc;
}

inline double fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

}  // namespace rydladder
