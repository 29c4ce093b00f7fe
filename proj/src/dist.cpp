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

#include "rydladder/dist.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rydladder/fitting.hpp"

namespace rydladder {

ProbDist::ProbDist(int n_atoms, std::vector<ProbEntry> entries, Origin origin, std::uint64_t n_shots)
    : n_atoms_(n_atoms), origin_(origin), n_shots_(n_shots), entries_(std::move(entries)) {
    if (n_atoms < 1 || n_atoms > 64) throw ParameterError("ProbDist: n_atoms must be in [1, 64]");
    std::sort(entries_.begin(), entries_.end(), [](const ProbEntry& a, const ProbEntry& b) { return a.bits < b.bits; });
    double total = 0.0;
    const Bits allowed = low_mask(n_atoms);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!(e.p > 0.0) || !std::isfinite(e.p)) throw ParameterError("ProbDist: probabilities must be positive");
        if ((e.bits & ~allowed) != 0) throw ParameterError("ProbDist: bitstring wider than n_atoms");
        if (i > 0 && entries_[i - 1].bits == e.bits) throw ParameterError("ProbDist: duplicate bitstring");
        total += e.p;
    }
    if (entries_.empty()) throw ParameterError("ProbDist: empty distribution");
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "ProbDist: probabilities sum to " << total;
        throw ParameterError(os.str());
    }
}

ProbDist ProbDist::from_weights(int n_atoms, std::vector<ProbEntry> weights, Origin origin, std::uint64_t n_shots) {
    std::erase_if(weights, [](const ProbEntry& e) { return !(e.p > 0.0); });
    double total = 0.0;
    for (const auto& e : weights) total += e.p;
    if (weights.empty() || !(total > 0.0)) throw ParameterError("ProbDist: no positive weight");
    for (auto& e : weights) e.p /= total;
    return ProbDist(n_atoms, std::move(weights), origin, n_shots);
}

ProbDist ProbDist::from_state(const PureState& psi) {
    std::vector<ProbEntry> entries;
    entries.reserve(psi.dim());
    for (std::size_t b = 0; b < psi.dim(); ++b) {
        const double p = std::norm(psi.amplitudes[b]);
        if (p > 0.0) entries.push_back({b, p});
    }
    return from_weights(psi.n_atoms, std::move(entries), Origin::exact);
}

double ProbDist::probability(Bits bits) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), bits,
                                     [](const ProbEntry& e, Bits b) { return e.bits < b; });
    return it != entries_.end() && it->bits == bits ? it->p : 0.0;
}

double ProbDist::max_probability() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.p);
    return m;
}

double ProbDist::min_probability() const {
    double m = 1.0;
    for (const auto& e : entries_) m = std::min(m, e.p);
    return m;
}

std::vector<double> ProbDist::dense() const {
    if (n_atoms_ > 30) throw ParameterError("ProbDist::dense: too many atoms");
    std::vector<double> out(std::size_t{1} << n_atoms_, 0.0);
    for (const auto& e : entries_) out[e.bits] = e.p;
    return out;
}

double total_variation(const ProbDist& p, const ProbDist& q) {
    auto a = p.entries();
    auto b = q.entries();
    std::size_t i = 0, j = 0;
    double acc = 0.0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].bits < b[j].bits)) {
            acc += a[i++].p;
        } else if (i == a.size() || b[j].bits < a[i].bits) {
            acc += b[j++].p;
        } else {
            acc += std::abs(a[i++].p - b[j++].p);
        }
    }
    return 0.5 * acc;
}

std::uint64_t CountTable::n_shots() const {
    std::uint64_t n = 0;
    for (const auto& [bits, c] : counts) n += c;
    return n;
}

ProbDist counts_to_probdist(const CountTable& counts) {
    const std::uint64_t total = counts.n_shots();
    if (total == 0) throw ParameterError("counts_to_probdist: empty count table");
    std::vector<ProbEntry> entries;
    for (const auto& [bits, c] : counts.counts) {
        if (c > 0) entries.push_back({bits, static_cast<double>(c) / static_cast<double>(total)});
    }
    return ProbDist::from_weights(counts.n_atoms, std::move(entries), Origin::sampled, total);
}

CountTable sample(const ProbDist& p, std::uint64_t n_shots, std::uint64_t seed) {
    CountTable out;
    out.n_atoms = p.n_atoms();
    if (n_shots == 0) return out;
    const auto entries = p.entries();
    // Each bitstring owns a subinterval of [0, 1) of length p.
    std::vector<double> upper(entries.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        acc += entries[i].p;
        upper[i] = acc;
    }
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> hits(entries.size(), 0);
    for (std::uint64_t s = 0; s < n_shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        auto it = std::upper_bound(upper.begin(), upper.end(), u);
        if (it == upper.end()) --it;
        ++hits[static_cast<std::size_t>(it - upper.begin())];
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (hits[i] > 0) out.counts.emplace(entries[i].bits, hits[i]);
    }
    return out;
}

double CumulativeCurve::at(double p_lambda) const {
    const auto it = std::upper_bound(points.begin(), points.end(), p_lambda,
                                     [](double v, const std::pair<double, double>& pt) { return v < pt.first; });
    if (it == points.begin()) return 0.0;
    return std::prev(it)->second;
}

namespace {

double binomial_log_pmf(std::uint64_t n, double p, std::uint64_t i) {
    const double dn = static_cast<double>(n);
    const double di = static_cast<double>(i);
    return std::lgamma(dn + 1.0) - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0) + di * std::log(p) +
           (dn - di) * std::log1p(-p);
}

/// Sum of pmf terms from `k` moving away from the mean in steps of `dir`.
double binomial_tail_sum(std::uint64_t n, double p, std::uint64_t k, int dir) {
    double acc = 0.0;
    for (std::uint64_t i = k;; i += static_cast<std::uint64_t>(dir)) {
        const double term = std::exp(binomial_log_pmf(n, p, i));
        acc += term;
        if (term <= 1e-17 * acc || (dir < 0 && i == 0) || (dir > 0 && i == n)) break;
    }
    return std::min(acc, 1.0);
}

void check_binomial(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binomial tail: p must lie in [0, 1]");
}

}  // namespace

double binomial_lower_tail(std::uint64_t n, double p, std::uint64_t k) {
    check_binomial(p);
    if (k >= n || p == 0.0) return 1.0;
    if (p == 1.0) return 0.0;
    if (static_cast<double>(k) < static_cast<double>(n) * p) return binomial_tail_sum(n, p, k, -1);
    return std::clamp(1.0 - binomial_upper_tail(n, p, k + 1), 0.0, 1.0);
}

double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t k) {
    check_binomial(p);
    if (k == 0) return 1.0;
    if (k > n || p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    if (static_cast<double>(k) > static_cast<double>(n) * p) return binomial_tail_sum(n, p, k, 1);
    return std::clamp(1.0 - binomial_lower_tail(n, p, k - 1), 0.0, 1.0);
}

bool within_binomial_band(std::uint64_t count, std::uint64_t n, double p, double z) {
    if (count > n) return false;
    const double alpha = 0.5 * std::erfc(z / std::sqrt(2.0));
    return binomial_lower_tail(n, p, count) >= alpha && binomial_upper_tail(n, p, count) >= alpha;
}

CumulativeCurve cumulative(const ProbDist& p) {
    std::vector<double> probs;
    probs.reserve(p.size());
    for (const auto& e : p.entries()) probs.push_back(e.p);
    std::sort(probs.begin(), probs.end());
    CumulativeCurve curve;
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        // Ties share one threshold and enter together.
        if (i + 1 < probs.size() && probs[i + 1] == probs[i]) continue;
        curve.points.emplace_back(probs[i], acc);
    }
    if (!curve.points.empty()) curve.points.back().second = 1.0;
    return curve;
}

double sup_distance(const CumulativeCurve& a, const CumulativeCurve& b) {
    double d = 0.0;
    for (const auto& [x, y] : a.points) d = std::max(d, std::abs(y - b.at(x)));
    for (const auto& [x, y] : b.points) d = std::max(d, std::abs(a.at(x) - y));
    return d;
}

DensityEstimate density_of_probability(const ProbDist& p, const LogBinning& binning) {
    if (!(binning.log10_lo < binning.log10_hi)) throw ParameterError("density: log10_lo must be below log10_hi");
    if (binning.n_bins < 2) throw ParameterError("density: need at least two bins");
    DensityEstimate d;
    d.binning = binning;
    const double w = binning.width();
    d.bins.resize(static_cast<std::size_t>(binning.n_bins));
    for (int b = 0; b < binning.n_bins; ++b) {
        auto& bin = d.bins[static_cast<std::size_t>(b)];
        const double centre = binning.log10_lo + (b + 0.5) * w;
        bin.p_center = std::pow(10.0, centre);
        bin.dp = std::pow(10.0, centre + w / 2) - std::pow(10.0, centre - w / 2);
    }
    for (const auto& e : p.entries()) {
        const double x = std::log10(e.p);
        if (x < binning.log10_lo || x > binning.log10_hi) continue;
        auto b = static_cast<int>(std::floor((x - binning.log10_lo) / w));
        b = std::clamp(b, 0, binning.n_bins - 1);
        auto& bin = d.bins[static_cast<std::size_t>(b)];
        ++bin.count;
        bin.mass += e.p;
    }
    for (auto& bin : d.bins) bin.density = static_cast<double>(bin.count) / bin.dp;
    return d;
}

PowerLawFit power_law_fit(const DensityEstimate& d, double p_lo, double p_hi) {
    std::vector<double> x, y;
    for (const auto& bin : d.bins) {
        if (bin.count == 0 || bin.p_center < p_lo || bin.p_center > p_hi) continue;
        x.push_back(std::log10(bin.p_center));
        y.push_back(std::log10(bin.density));
    }
    if (x.size() < 3) {
        throw NumericalError("power_law_fit: need at least 3 nonempty bins in range, found " + std::to_string(x.size()));
    }
    const LinearFit lf = ols(x, y);
    PowerLawFit fit;
    fit.c = std::pow(10.0, lf.intercept);
    fit.zeta = -lf.slope - 1.0;
    fit.r2 = lf.r2;
    fit.n_points = static_cast<int>(x.size());
    fit.p_lo = p_lo;
    fit.p_hi = p_hi;
    return fit;
}

std::vector<MaxProbPoint> max_prob_series(std::span<const LadderSystem> systems, const GroundStateOptions& options) {
    std::vector<MaxProbPoint> out;
    out.reserve(systems.size());
    for (const auto& sys : systems) {
        const GroundState gs = ground_state(sys, options);
        double pmax = 0.0;
        for (const auto& c : gs.psi.amplitudes) pmax = std::max(pmax, std::norm(c));
        out.push_back({sys.n_rungs, pmax});
    }
    return out;
}

ExpDecayFit exp_decay_fit(std::span<const MaxProbPoint> series, std::optional<int> mod3_class) {
    std::vector<double> x, y;
    for (const auto& pt : series) {
        if (mod3_class && pt.n_rungs % 3 != *mod3_class) continue;
        if (!(pt.p_max > 0.0)) throw ParameterError("exp_decay_fit: P_max must be positive");
        x.push_back(pt.n_rungs);
        y.push_back(std::log(pt.p_max));
    }
    if (x.size() < 2) throw NumericalError("exp_decay_fit: need at least 2 points in the selected class");
    const LinearFit lf = ols(x, y);
    ExpDecayFit fit;
    fit.amplitude = std::exp(lf.intercept);
    fit.k = -lf.slope;
    fit.r2 = lf.r2;
    fit.n_points = static_cast<int>(x.size());
    return fit;
}

}  // namespace rydladder
