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

#include <bit>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydladder {

/// Computational-basis label. Bit k is the Rydberg occupation of atom k.
using Bits = std::uint64_t;
using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Invalid user-supplied parameters (maps to CLI exit code 2).
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Solver or fit failure (maps to CLI exit code 3).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files (maps to CLI exit code 4).
class DataFormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline int popcount(Bits b) { return std::popcount(b); }

inline Bits low_mask(int n) { return n >= 64 ? ~Bits{0} : ((Bits{1} << n) - 1); }

/// Gathers the bits of `b` selected by `mask` into the low bits of the result,
/// preserving order (a portable pext).
class BitGather {
  public:
    BitGather() = default;
    explicit BitGather(Bits mask) {
        for (int k = 0; k < 64; ++k) {
            if ((mask >> k) & 1u) positions_.push_back(k);
        }
    }

    Bits operator()(Bits b) const {
        Bits out = 0;
        for (std::size_t i = 0; i < positions_.size(); ++i) {
            out |= ((b >> positions_[i]) & 1u) << i;
        }
        return out;
    }

    Bits scatter(Bits compact) const {
        Bits out = 0;
        for (std::size_t i = 0; i < positions_.size(); ++i) {
            out |= ((compact >> i) & 1u) << positions_[i];
        }
        return out;
    }

    int width() const { return static_cast<int>(positions_.size()); }

  private:
    std::vector<int> positions_;
};

}  // namespace rydladder
