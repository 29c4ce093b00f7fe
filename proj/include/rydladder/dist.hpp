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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rydladder/lattice.hpp"
#include "rydladder/spectrum.hpp"
#include "rydladder/state.hpp"

namespace rydladder {

enum class Origin { exact, sampled, mitigated };

struct ProbEntry {
    Bits bits = 0;
    double p = 0.0;
};

/// Normalized bitstring distribution. Only strictly positive entries are
/// stored, sorted by bitstring.
class ProbDist {
  public:
    ProbDist() = default;
    /// Validates positivity, uniqueness and normalization (1e-9).
    ProbDist(int n_atoms, std::vector<ProbEntry> entries, Origin origin = Origin::exact, std::uint64_t n_shots = 0);

    /// Drops non-positive weights and rescales the rest to unit sum.
    static ProbDist from_weights(int n_atoms, std::vector<ProbEntry> weights, Origin origin = Origin::exact,
                                 std::uint64_t n_shots = 0);
    /// Born-rule probabilities |c_n|^2 of a state vector.
    static ProbDist from_state(const PureState& psi);

    int n_atoms() const { return n_atoms_; }
    Origin origin() const { return origin_; }
    std::uint64_t n_shots() const { return n_shots_; }
    std::span<const ProbEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    double probability(Bits bits) const;
    double max_probability() const;
    double min_probability() const;
    /// Dense vector of length 2^n_atoms (n_atoms <= 30).
    std::vector<double> dense() const;

  private:
    int n_atoms_ = 0;
    Origin origin_ = Origin::exact;
    std::uint64_t n_shots_ = 0;
    std::vector<ProbEntry> entries_;
};

double total_variation(const ProbDist& p, const ProbDist& q);

/// Aggregated measurement outcomes.
struct CountTable {
    int n_atoms = 0;
    std::map<Bits, std::uint64_t> counts;

    std::uint64_t n_shots() const;
    void add(Bits bits, std::uint64_t n = 1) { counts[bits] += n; }
};

/// p = N_n / N_sh; throws ParameterError on an empty table.
ProbDist counts_to_probdist(const CountTable& counts);

/// n_shots independent draws by inverting the cumulative interval map.
CountTable sample(const ProbDist& p, std::uint64_t n_shots, std::uint64_t seed);

/// P(X <= k) and P(X >= k) for X ~ Binomial(n, p).
double binomial_lower_tail(std::uint64_t n, double p, std::uint64_t k);
double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t k);

/// True when neither binomial tail at `count` is smaller than the one-sided
/// normal tail at `z` standard deviations.
bool within_binomial_band(std::uint64_t count, std::uint64_t n, double p, double z = 5.0);

struct CumulativeCurve {
    /// (p_lambda, Sigma(p_lambda)) at each distinct probability, increasing.
    std::vector<std::pair<double, double>> points;

    /// Sigma(p_lambda) = sum over p_n <= p_lambda.
    double at(double p_lambda) const;
};

CumulativeCurve cumulative(const ProbDist& p);

/// Sup-distance between two step curves, evaluated at every breakpoint of either.
double sup_distance(const CumulativeCurve& a, const CumulativeCurve& b);

struct LogBinning {
    double log10_lo = -26.0;
    double log10_hi = -1.0;
    int n_bins = 50;

    double width() const { return (log10_hi - log10_lo) / n_bins; }
};

struct DensityBin {
    double p_center = 0.0;
    double dp = 0.0;
    std::uint64_t count = 0;
    double mass = 0.0;
    /// count / dp
    double density = 0.0;
};

struct DensityEstimate {
    LogBinning binning;
    std::vector<DensityBin> bins;
};

/// Log-spaced histogram of the bitstring probabilities. Bin b covers
/// [10^(lo + b w), 10^(lo + (b+1) w)); the last bin also takes p == 10^hi.
DensityEstimate density_of_probability(const ProbDist& p, const LogBinning& binning = {});

struct PowerLawFit {
    double c = 0.0;
    double zeta = 0.0;
    double r2 = 0.0;
    int n_points = 0;
    double p_lo = 0.0;
    double p_hi = 0.0;
};

/// Log-space least squares of N(p) ~ C p^(-1-zeta) over nonempty bins with
/// p_center in [p_lo, p_hi].
PowerLawFit power_law_fit(const DensityEstimate& d, double p_lo, double p_hi);

struct MaxProbPoint {
    int n_rungs = 0;
    double p_max = 0.0;
};

std::vector<MaxProbPoint> max_prob_series(std::span<const LadderSystem> systems, const GroundStateOptions& options = {});

struct ExpDecayFit {
    double amplitude = 0.0;
    double k = 0.0;
    double r2 = 0.0;
    int n_points = 0;
};

/// Fits P_max = A exp(-k N_s) by least squares on ln P_max. With
/// `mod3_class` set, only sizes with N_s mod 3 == class are used.
ExpDecayFit exp_decay_fit(std::span<const MaxProbPoint> series, std::optional<int> mod3_class = std::nullopt);

}  // namespace rydladder
