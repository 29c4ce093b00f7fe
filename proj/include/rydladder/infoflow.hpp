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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rydladder/dist.hpp"
#include "rydladder/state.hpp"

namespace rydladder {

/// One region label per atom, atoms in rung-major order ("AABB", "DDAABBCCDD").
class Partition {
  public:
    explicit Partition(std::string labels);

    /// Left half of the rungs labelled A, right half B (B takes the middle
    /// rung when the count is odd). A single rung is split by leg.
    static Partition half_cut(int n_rungs);

    /// One D rung at each end, the inner rungs split into A, B, C with the
    /// remainder in B ("DDAABBCCDD" for 5 rungs).
    static Partition four_region(int n_rungs);
    int n_atoms() const { return static_cast<int>(labels_.size()); }
    const std::string& labels() const { return labels_; }
    /// Distinct labels in sorted order.
    const std::string& classes() const { return classes_; }
    int n_classes() const { return static_cast<int>(classes_.size()); }

    /// Atoms whose label appears in `region_labels`.
    Bits mask(std::string_view region_labels) const;
    Bits class_mask(int class_index) const;
    Bits all_mask() const { return low_mask(n_atoms()); }

    void require_classes(int n) const;

  private:
    std::string labels_;
    std::string classes_;
};

/// -sum p ln p in nats.
double shannon_entropy(const ProbDist& p);

/// p(n_region) = sum over the complement; bits of the result are the region
/// atoms packed in increasing atom order.
ProbDist marginal(const ProbDist& p, Bits region_mask);
ProbDist marginal(const ProbDist& p, const Partition& part, std::string_view region_labels);

/// Shannon entropy of the marginal over `region_mask`, without materializing it.
double marginal_entropy(const ProbDist& p, Bits region_mask);

/// I = S_A + S_B - S_AB for a two-class partition (A = first class).
double mutual_information(const ProbDist& p, const Partition& part);

/// S_{A|B} = S_AB - S_B.
double conditional_entropy(const ProbDist& p, const Partition& part);

/// Drops entries with p < p_min and renormalizes.
ProbDist filter(const ProbDist& p, double p_min);

struct FiltrationPoint {
    double p_min = 0.0;
    double i_ab = 0.0;
    double s_cond = 0.0;
    std::size_t survivors = 0;
    /// False when no bitstring survives the threshold.
    bool valid = true;
};

struct FiltrationCurve {
    std::vector<FiltrationPoint> points;

    std::vector<FiltrationPoint> valid_points() const;
};

/// Logarithmic grid of `n` thresholds from `lo` up to the largest probability.
std::vector<double> log_threshold_grid(const ProbDist& p, double lo = 1e-6, int n = 60);

FiltrationCurve filtration_curve(const ProbDist& p, const Partition& part, std::span<const double> grid);

/// s(x) = c + L (1 - tanh((x - x0) / w)) / 2 with x = log10(p_min).
struct SigmoidFit {
    double c = 0.0;
    double amplitude = 0.0;
    double x0 = 0.0;
    double width = 0.0;
    double rss = 0.0;
    int n_points = 0;

    double p_star() const;
    double operator()(double x) const;
};

class FitError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Least-squares shifted-tanh fit of the conditional entropy against
/// log10(p_min); throws FitError when no acceptable fit exists.
SigmoidFit sigmoid_inflection(const FiltrationCurve& curve);

/// First threshold where s_cond drops to half its unfiltered value, refined
/// by interpolation in log10(p_min) between the bracketing grid points.
double mid_height_threshold(const FiltrationCurve& curve);

struct EstimatorConfig {
    double eps_small = 0.05;
    double eps_gain = 0.05;
    double grid_lo = 1e-6;
    int grid_points = 60;
};

enum class EstimateMethod { unfiltered, sigmoid, mid_height };

std::string_view method_name(EstimateMethod m);

struct EntanglementEstimate {
    double estimate = 0.0;
    EstimateMethod method = EstimateMethod::unfiltered;
    double p_star = 0.0;
    double unfiltered = 0.0;
    /// Filtered I at p_star (equals `unfiltered` when no threshold was found).
    double filtered = 0.0;
    FiltrationCurve curve;
};

EntanglementEstimate estimate_entanglement(const ProbDist& p, const Partition& part, const EstimatorConfig& config = {});

/// S_AB + S_BC - S_A - S_C from reduced density matrices (4-class partition,
/// classes taken in sorted order as A, B, C, D).
double weak_monotonicity_vn(const PureState& psi, const Partition& part);

/// I_{AB,CD} + I_{BC,AD} - I_{A,BCD} - I_{C,ABD} from bitstring marginals.
double weak_monotonicity_mi(const ProbDist& p, const Partition& part);

/// The same combination written with every region replaced by its complement.
double weak_monotonicity_mi_complement(const ProbDist& p, const Partition& part);

}  // namespace rydladder
