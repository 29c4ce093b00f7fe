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

#include "rydladder/infoflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "rydladder/fitting.hpp"
#include "rydladder/spectrum.hpp"

namespace rydladder {

Partition::Partition(std::string labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ParameterError("partition: empty label string");
    if (labels_.size() > 64) throw ParameterError("partition: more than 64 atoms");
    classes_ = labels_;
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
}

Partition Partition::half_cut(int n_rungs) {
    if (n_rungs < 1) throw ParameterError("half cut needs at least 1 rung");
    if (n_rungs == 1) return Partition("AB");
    const auto left = static_cast<std::size_t>(2 * (n_rungs / 2));
    return Partition(std::string(left, 'A') + std::string(static_cast<std::size_t>(2 * n_rungs) - left, 'B'));
}

Partition Partition::four_region(int n_rungs) {
    if (n_rungs < 5) throw ParameterError("four-region pattern needs at least 5 rungs");
    const int inner = n_rungs - 2;
    const int outer = inner / 3;
    const int middle = inner - 2 * outer;
    std::string rungs = "D" + std::string(static_cast<std::size_t>(outer), 'A') +
                        std::string(static_cast<std::size_t>(middle), 'B') +
                        std::string(static_cast<std::size_t>(outer), 'C') + "D";
    std::string labels;
    for (char c : rungs) labels += std::string(2, c);
    return Partition(labels);
}

Bits Partition::mask(std::string_view region_labels) const {
    Bits m = 0;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (region_labels.find(labels_[k]) != std::string_view::npos) m |= Bits{1} << k;
    }
    if (m == 0) throw ParameterError("partition: region '" + std::string(region_labels) + "' selects no atoms");
    return m;
}

Bits Partition::class_mask(int class_index) const {
    if (class_index < 0 || class_index >= n_classes()) throw ParameterError("partition: class index out of range");
    return mask(std::string_view(&classes_[static_cast<std::size_t>(class_index)], 1));
}

void Partition::require_classes(int n) const {
    if (n_classes() != n) {
        throw ParameterError("partition '" + labels_ + "' has " + std::to_string(n_classes()) + " classes, expected " +
                             std::to_string(n));
    }
}

double shannon_entropy(const ProbDist& p) {
    double s = 0.0;
    for (const auto& e : p.entries()) s -= e.p * std::log(e.p);
    return s;
}

namespace {

void check_region(const ProbDist& p, Bits region_mask) {
    if ((region_mask & low_mask(p.n_atoms())) == 0) throw ParameterError("marginal: empty region");
    if ((region_mask & ~low_mask(p.n_atoms())) != 0) throw ParameterError("marginal: region outside the system");
}

/// Running sums for the marginal over one region: bin masses and sum m ln m.
class MarginalAccumulator {
  public:
    explicit MarginalAccumulator(Bits region_mask) : gather_(region_mask) {
        if (gather_.width() <= 24) dense_.assign(std::size_t{1} << gather_.width(), 0.0);
    }

    void add(Bits bits, double p) {
        const Bits key = gather_(bits);
        double& m = dense_.empty() ? sparse_[key] : dense_[key];
        if (m > 0.0) sum_mlnm_ -= m * std::log(m);
        m += p;
        sum_mlnm_ += m * std::log(m);
    }

    /// Entropy of the accumulated masses after normalizing by `total`.
    double entropy(double total) const { return std::log(total) - sum_mlnm_ / total; }

  private:
    BitGather gather_;
    std::vector<double> dense_;
    std::unordered_map<Bits, double> sparse_;
    double sum_mlnm_ = 0.0;
};

struct BipartiteEntropies {
    double s_a = 0.0;
    double s_b = 0.0;
    double s_ab = 0.0;
};

BipartiteEntropies bipartite_entropies(const ProbDist& p, const Partition& part) {
    part.require_classes(2);
    if (part.n_atoms() != p.n_atoms()) throw ParameterError("partition length does not match the distribution");
    return {marginal_entropy(p, part.class_mask(0)), marginal_entropy(p, part.class_mask(1)), shannon_entropy(p)};
}

}  // namespace

ProbDist marginal(const ProbDist& p, Bits region_mask) {
    check_region(p, region_mask);
    const BitGather gather(region_mask);
    std::unordered_map<Bits, double> acc;
    for (const auto& e : p.entries()) acc[gather(e.bits)] += e.p;
    std::vector<ProbEntry> entries;
    entries.reserve(acc.size());
    for (const auto& [bits, q] : acc) entries.push_back({bits, q});
    return ProbDist::from_weights(gather.width(), std::move(entries), p.origin(), p.n_shots());
}

ProbDist marginal(const ProbDist& p, const Partition& part, std::string_view region_labels) {
    if (part.n_atoms() != p.n_atoms()) throw ParameterError("partition length does not match the distribution");
    return marginal(p, part.mask(region_labels));
}

double marginal_entropy(const ProbDist& p, Bits region_mask) {
    check_region(p, region_mask);
    if ((region_mask & low_mask(p.n_atoms())) == low_mask(p.n_atoms())) return shannon_entropy(p);
    MarginalAccumulator acc(region_mask);
    double total = 0.0;
    for (const auto& e : p.entries()) {
        acc.add(e.bits, e.p);
        total += e.p;
    }
    return acc.entropy(total);
}

double mutual_information(const ProbDist& p, const Partition& part) {
    const auto s = bipartite_entropies(p, part);
    return s.s_a + s.s_b - s.s_ab;
}

double conditional_entropy(const ProbDist& p, const Partition& part) {
    const auto s = bipartite_entropies(p, part);
    return s.s_ab - s.s_b;
}

ProbDist filter(const ProbDist& p, double p_min) {
    if (!(p_min >= 0.0) || !(p_min < 1.0)) throw ParameterError("filter: p_min must lie in [0, 1)");
    std::vector<ProbEntry> kept;
    for (const auto& e : p.entries()) {
        if (!(e.p < p_min)) kept.push_back(e);
    }
    if (kept.empty()) throw ParameterError("filter: no bitstring survives p_min");
    return ProbDist::from_weights(p.n_atoms(), std::move(kept), p.origin(), p.n_shots());
}

std::vector<FiltrationPoint> FiltrationCurve::valid_points() const {
    std::vector<FiltrationPoint> out;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out), [](const FiltrationPoint& pt) { return pt.valid; });
    return out;
}

std::vector<double> log_threshold_grid(const ProbDist& p, double lo, int n) {
    const double hi = p.max_probability();
    if (!(lo > 0.0) || !(lo < hi)) throw ParameterError("threshold grid: lower end must lie in (0, max p)");
    if (n < 2) throw ParameterError("threshold grid: need at least 2 points");
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
    grid.back() = hi;
    return grid;
}

FiltrationCurve filtration_curve(const ProbDist& p, const Partition& part, std::span<const double> grid) {
    part.require_classes(2);
    if (part.n_atoms() != p.n_atoms()) throw ParameterError("partition length does not match the distribution");
    if (!std::is_sorted(grid.begin(), grid.end())) throw ParameterError("filtration grid must be ascending");

    // Survivors of a threshold are a prefix of the entries sorted by
    // decreasing probability, so sweep thresholds from the top down and grow
    // the marginals incrementally.
    std::vector<ProbEntry> sorted(p.entries().begin(), p.entries().end());
    std::sort(sorted.begin(), sorted.end(), [](const ProbEntry& a, const ProbEntry& b) { return a.p > b.p; });

    MarginalAccumulator acc_a(part.class_mask(0));
    MarginalAccumulator acc_b(part.class_mask(1));
    double total = 0.0;
    double sum_plnp = 0.0;
    std::size_t taken = 0;

    FiltrationCurve curve;
    curve.points.resize(grid.size());
    for (std::size_t gi = grid.size(); gi-- > 0;) {
        const double t = grid[gi];
        while (taken < sorted.size() && !(sorted[taken].p < t)) {
            const auto& e = sorted[taken++];
            acc_a.add(e.bits, e.p);
            acc_b.add(e.bits, e.p);
            total += e.p;
            sum_plnp += e.p * std::log(e.p);
        }
        FiltrationPoint& pt = curve.points[gi];
        pt.p_min = t;
        pt.survivors = taken;
        if (taken == 0) {
            pt.valid = false;
            pt.i_ab = std::numeric_limits<double>::quiet_NaN();
            pt.s_cond = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double s_ab = std::log(total) - sum_plnp / total;
        const double s_a = acc_a.entropy(total);
        const double s_b = acc_b.entropy(total);
        pt.i_ab = s_a + s_b - s_ab;
        pt.s_cond = s_ab - s_b;
    }
    return curve;
}

double SigmoidFit::p_star() const { return std::pow(10.0, x0); }

double SigmoidFit::operator()(double x) const { return c + amplitude * (1.0 - std::tanh((x - x0) / width)) / 2.0; }

SigmoidFit sigmoid_inflection(const FiltrationCurve& curve) {
    std::vector<double> x, y;
    for (const auto& pt : curve.points) {
        if (!pt.valid || !(pt.p_min > 0.0)) continue;
        x.push_back(std::log10(pt.p_min));
        y.push_back(pt.s_cond);
    }
    if (x.size() < 5) throw FitError("sigmoid fit: need at least 5 valid thresholds, found " + std::to_string(x.size()));
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    const double xmin = *xmin_it;
    const double xmax = *xmax_it;
    const double span = xmax - xmin;
    const double ymax = *std::max_element(y.begin(), y.end());
    if (!(span > 0.0) || !(ymax > 0.0)) throw FitError("sigmoid fit: degenerate curve");

    const ScalarModel model = [](double xv, const Eigen::VectorXd& q) {
        return q(0) + q(1) * (1.0 - std::tanh((xv - q(2)) / q(3))) / 2.0;
    };
    CurveFitOptions options;
    options.lower = Eigen::Vector4d(0.0, 0.0, xmin - span, 1e-3 * span);
    options.upper = Eigen::Vector4d(2.0 * ymax, 4.0 * ymax, xmax + span, 10.0 * span);

    std::optional<CurveFitResult> best;
    for (int i = 0; i < 15; ++i) {
        const double x0 = xmin + span * i / 14.0;
        for (double w : {0.2, 0.5, 1.0, 2.0}) {
            CurveFitResult r = levenberg_marquardt(model, x, y, Eigen::Vector4d(0.0, y.front(), x0, w), options);
            if (!r.converged || !std::isfinite(r.rss)) continue;
            if (!best || r.rss < best->rss) best = std::move(r);
        }
    }
    if (!best) throw FitError("sigmoid fit did not converge");
    SigmoidFit fit;
    fit.c = best->params(0);
    fit.amplitude = best->params(1);
    fit.x0 = best->params(2);
    fit.width = best->params(3);
    fit.rss = best->rss;
    fit.n_points = static_cast<int>(x.size());
    if (fit.x0 < xmin || fit.x0 > xmax) throw FitError("sigmoid fit: inflection outside the threshold range");
    if (!(fit.amplitude > 0.0)) throw FitError("sigmoid fit: no decay in the conditional entropy");
    return fit;
}

double mid_height_threshold(const FiltrationCurve& curve) {
    const auto pts = curve.valid_points();
    if (pts.empty() || !(pts.front().s_cond > 0.0)) throw NumericalError("mid-height: initial conditional entropy is not positive");
    const double half = pts.front().s_cond / 2.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].s_cond > half) continue;
        const auto& lo = pts[i - 1];
        const auto& hi = pts[i];
        if (!(lo.p_min > 0.0) || hi.s_cond == lo.s_cond) return hi.p_min;
        const double xl = std::log10(lo.p_min);
        const double xh = std::log10(hi.p_min);
        const double frac = (half - lo.s_cond) / (hi.s_cond - lo.s_cond);
        return std::pow(10.0, xl + frac * (xh - xl));
    }
    throw NumericalError("mid-height: conditional entropy never drops to half its initial value");
}

std::string_view method_name(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::unfiltered: return "unfiltered";
        case EstimateMethod::sigmoid: return "sigmoid";
        case EstimateMethod::mid_height: return "mid_height";
    }
    return "unknown";
}

EntanglementEstimate estimate_entanglement(const ProbDist& p, const Partition& part, const EstimatorConfig& config) {
    EntanglementEstimate out;
    out.unfiltered = mutual_information(p, part);
    out.estimate = out.unfiltered;
    out.filtered = out.unfiltered;
    if (out.unfiltered < config.eps_small) return out;

    const auto grid = log_threshold_grid(p, config.grid_lo, config.grid_points);
    out.curve = filtration_curve(p, part, grid);
    EstimateMethod method = EstimateMethod::sigmoid;
    try {
        out.p_star = sigmoid_inflection(out.curve).p_star();
    } catch (const FitError&) {
        method = EstimateMethod::mid_height;
        out.p_star = mid_height_threshold(out.curve);
    }
    out.filtered = mutual_information(filter(p, out.p_star), part);
    if ((out.filtered - out.unfiltered) / out.unfiltered < config.eps_gain) return out;
    out.estimate = out.filtered;
    out.method = method;
    return out;
}

namespace {

struct FourRegions {
    Bits a, b, c, d;
};

FourRegions four_regions(const Partition& part, int n_atoms) {
    part.require_classes(4);
    if (part.n_atoms() != n_atoms) throw ParameterError("partition length does not match the system");
    return {part.class_mask(0), part.class_mask(1), part.class_mask(2), part.class_mask(3)};
}

}  // namespace

double weak_monotonicity_vn(const PureState& psi, const Partition& part) {
    const auto r = four_regions(part, psi.n_atoms);
    return entanglement_entropy(psi, r.a | r.b) + entanglement_entropy(psi, r.b | r.c) - entanglement_entropy(psi, r.a) -
           entanglement_entropy(psi, r.c);
}

double weak_monotonicity_mi(const ProbDist& p, const Partition& part) {
    const auto r = four_regions(part, p.n_atoms());
    auto s = [&p](Bits m) { return marginal_entropy(p, m); };
    return s(r.a | r.b) + s(r.c | r.d) + s(r.b | r.c) + s(r.a | r.d) - s(r.a) - s(r.b | r.c | r.d) - s(r.c) -
           s(r.a | r.b | r.d);
}

double weak_monotonicity_mi_complement(const ProbDist& p, const Partition& part) {
    const auto r = four_regions(part, p.n_atoms());
    auto s = [&p](Bits m) { return marginal_entropy(p, m); };
    const double s_all = shannon_entropy(p);
    auto mi = [&](Bits x, Bits y) { return s(x) + s(y) - s_all; };
    return mi(r.c | r.d, r.a | r.b) + mi(r.a | r.d, r.b | r.c) - mi(r.b | r.c | r.d, r.a) - mi(r.a | r.b | r.d, r.c);
}

}  // namespace rydladder
