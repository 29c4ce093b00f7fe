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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rydladder/dist.hpp"

namespace rydladder {
namespace {

ProbDist three_point() { return ProbDist(2, {{0b00, 0.5}, {0b01, 0.3}, {0b10, 0.2}}); }

const ProbDist& six_rung() {
    static const ProbDist p = ProbDist::from_state(ground_state(build_system(6, 4.1, 2.35, 3.5)).psi);
    return p;
}

TEST(ProbDist, ValidatesEntries) {
    EXPECT_THROW(ProbDist(2, {{0, 0.5}, {1, 0.4}}), ParameterError);
    EXPECT_THROW(ProbDist(2, {{0, 0.5}, {0, 0.5}}), ParameterError);
    EXPECT_THROW(ProbDist(2, {{4, 1.0}}), ParameterError);
    EXPECT_THROW(ProbDist(2, {{0, 1.5}, {1, -0.5}}), ParameterError);
    EXPECT_THROW(ProbDist(0, {}), ParameterError);
    EXPECT_NO_THROW(ProbDist(2, {{3, 1.0}}));
}

TEST(ProbDist, SortedLookup) {
    const ProbDist p(2, {{0b10, 0.2}, {0b00, 0.5}, {0b01, 0.3}});
    EXPECT_EQ(p.entries()[0].bits, 0u);
    EXPECT_EQ(p.entries()[2].bits, 2u);
    EXPECT_DOUBLE_EQ(p.probability(0b01), 0.3);
    EXPECT_EQ(p.probability(0b11), 0.0);
    EXPECT_DOUBLE_EQ(p.max_probability(), 0.5);
    EXPECT_DOUBLE_EQ(p.min_probability(), 0.2);
}

TEST(ProbDist, FromStateIsBornRule) {
    std::mt19937_64 rng(1);
    const PureState psi = oracle::random_sparse_state(6, rng);
    const ProbDist p = ProbDist::from_state(psi);
    for (std::size_t b = 0; b < psi.dim(); ++b) EXPECT_NEAR(p.probability(b), std::norm(psi.amplitudes[b]), 1e-15);
}

TEST(TotalVariation, HandValues) {
    const ProbDist a(1, {{0, 1.0}});
    const ProbDist b(1, {{1, 1.0}});
    EXPECT_DOUBLE_EQ(total_variation(a, b), 1.0);
    EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
    EXPECT_NEAR(total_variation(three_point(), ProbDist(2, {{0, 0.4}, {1, 0.3}, {3, 0.3}})), 0.3, 1e-15);
}

TEST(Counts, ToProbDist) {
    CountTable one{2, {{0b10, 1}}};
    const ProbDist p1 = counts_to_probdist(one);
    EXPECT_EQ(p1.size(), 1u);
    EXPECT_DOUBLE_EQ(p1.probability(0b10), 1.0);
    CountTable t{2, {{0b00, 730}, {0b11, 270}}};
    const ProbDist p = counts_to_probdist(t);
    EXPECT_DOUBLE_EQ(p.probability(0b00), 0.73);
    EXPECT_DOUBLE_EQ(p.probability(0b11), 0.27);
    EXPECT_EQ(p.origin(), Origin::sampled);
    EXPECT_EQ(p.n_shots(), 1000u);
    EXPECT_THROW(counts_to_probdist(CountTable{2, {}}), ParameterError);
}

TEST(Sample, EdgeCases) {
    EXPECT_EQ(sample(three_point(), 0, 1).n_shots(), 0u);
    const CountTable c = sample(ProbDist(3, {{0b101, 1.0}}), 50, 1);
    EXPECT_EQ(c.counts.size(), 1u);
    EXPECT_EQ(c.counts.at(0b101), 50u);
}

TEST(Sample, DeterministicPerSeed) {
    const CountTable a = sample(six_rung(), 4405, 42);
    const CountTable b = sample(six_rung(), 4405, 42);
    const CountTable c = sample(six_rung(), 4405, 43);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, c.counts);
}

TEST(Sample, MinimumProbabilityIsOneOverShots) {
    const ProbDist p = counts_to_probdist(sample(six_rung(), 4405, 7));
    EXPECT_NEAR(p.min_probability(), 1.0 / 4405, 1e-17);
    EXPECT_EQ(p.n_shots(), 4405u);
    for (const auto& e : p.entries()) EXPECT_GT(six_rung().probability(e.bits), 0.0);
}

TEST(Sample, CountsWithinBinomialBands) {
    const ProbDist p(2, {{0, 0.5}, {1, 0.3}, {2, 0.15}, {3, 0.05}});
    const std::uint64_t n = 100000;
    const CountTable c = sample(p, n, 99);
    for (const auto& e : p.entries()) {
        const double sigma = std::sqrt(n * e.p * (1 - e.p));
        EXPECT_LT(std::abs(static_cast<double>(c.counts.at(e.bits)) - n * e.p), 5 * sigma);
        EXPECT_TRUE(within_binomial_band(c.counts.at(e.bits), n, e.p));
    }
}

TEST(Binomial, TailsMatchDirectSums) {
    const std::uint64_t n = 40;
    const double p = 0.3;
    std::vector<double> pmf(n + 1);
    for (std::uint64_t i = 0; i <= n; ++i) {
        pmf[i] = std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * std::log(p) +
                          (n - i) * std::log(1 - p));
    }
    double lo = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) {
        lo += pmf[k];
        double hi = 0.0;
        for (std::uint64_t i = k; i <= n; ++i) hi += pmf[i];
        EXPECT_NEAR(binomial_lower_tail(n, p, k), lo, 1e-12);
        EXPECT_NEAR(binomial_upper_tail(n, p, k), hi, 1e-12);
    }
    EXPECT_EQ(binomial_upper_tail(n, p, n + 1), 0.0);
    EXPECT_EQ(binomial_lower_tail(n, 0.0, 0), 1.0);
}

TEST(Binomial, BandRejectsImplausibleCounts) {
    EXPECT_TRUE(within_binomial_band(0, 10000, 1e-6));
    EXPECT_TRUE(within_binomial_band(1, 10000, 1e-6));
    EXPECT_FALSE(within_binomial_band(1, 10000, 1e-12));
    EXPECT_FALSE(within_binomial_band(0, 10000, 0.01));
    EXPECT_FALSE(within_binomial_band(600, 10000, 0.5));
}

TEST(Cumulative, HandValues) {
    const CumulativeCurve c = cumulative(three_point());
    EXPECT_DOUBLE_EQ(c.at(0.3), 0.5);
    EXPECT_DOUBLE_EQ(c.at(0.5), 1.0);
    EXPECT_DOUBLE_EQ(c.at(0.9), 1.0);
    EXPECT_DOUBLE_EQ(c.at(0.1), 0.0);
    ASSERT_EQ(c.points.size(), 3u);
    EXPECT_DOUBLE_EQ(c.points.back().second, 1.0);
}

TEST(Cumulative, TiesAccumulateTogether) {
    const CumulativeCurve c = cumulative(ProbDist(2, {{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}}));
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_DOUBLE_EQ(c.at(0.25), 1.0);
    EXPECT_DOUBLE_EQ(c.at(0.2499), 0.0);
}

TEST(Cumulative, MonotoneProperty) {
    const CumulativeCurve c = cumulative(six_rung());
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        EXPECT_GT(c.points[i].first, c.points[i - 1].first);
        EXPECT_GE(c.points[i].second, c.points[i - 1].second);
    }
}

TEST(Cumulative, SupDistance) {
    const CumulativeCurve a = cumulative(three_point());
    EXPECT_EQ(sup_distance(a, a), 0.0);
    const CumulativeCurve b = cumulative(ProbDist(2, {{0, 0.6}, {1, 0.4}}));
    EXPECT_NEAR(sup_distance(a, b), 0.6, 1e-15);
}

TEST(Density, SingleEntryOneBin) {
    const DensityEstimate d = density_of_probability(ProbDist(1, {{0, 1.0}}), {-3.0, 0.0, 3});
    std::uint64_t total = 0;
    for (const auto& b : d.bins) total += b.count;
    EXPECT_EQ(total, 1u);
    EXPECT_EQ(d.bins.back().count, 1u);
}

TEST(Density, UniformSingleBin) {
    std::vector<ProbEntry> e;
    for (Bits b = 0; b < 16; ++b) e.push_back({b, 1.0 / 16});
    const DensityEstimate d = density_of_probability(ProbDist(4, e));
    int occupied = 0;
    for (const auto& b : d.bins) {
        if (b.count) {
            ++occupied;
            EXPECT_EQ(b.count, 16u);
            EXPECT_NEAR(b.mass, 1.0, 1e-15);
            EXPECT_NEAR(b.density, 16.0 / b.dp, 1e-12 * b.density);
        }
    }
    EXPECT_EQ(occupied, 1);
}

TEST(Density, BinGeometry) {
    const DensityEstimate d = density_of_probability(six_rung());
    ASSERT_EQ(d.bins.size(), 50u);
    const double w = 0.5;
    for (std::size_t i = 0; i < d.bins.size(); ++i) {
        const double lo = -26.0 + w * static_cast<double>(i);
        EXPECT_NEAR(std::log10(d.bins[i].p_center), lo + w / 2, 1e-12);
        EXPECT_NEAR(d.bins[i].dp, std::pow(10.0, lo + w) - std::pow(10.0, lo), 1e-12 * d.bins[i].dp);
    }
    double mass = 0.0;
    std::uint64_t count = 0;
    for (const auto& b : d.bins) {
        mass += b.mass;
        count += b.count;
    }
    std::uint64_t in_range = 0;
    for (const auto& e : six_rung().entries()) in_range += e.p >= 1e-26 ? 1 : 0;
    EXPECT_EQ(count, in_range);
    EXPECT_LE(mass, 1.0 + 1e-12);
}

TEST(PowerLaw, RecoversSyntheticExponent) {
    DensityEstimate d;
    d.binning = {-10.0, 0.0, 20};
    for (int i = 0; i < 20; ++i) {
        DensityBin b;
        b.p_center = std::pow(10.0, -10.0 + 0.5 * i + 0.25);
        b.count = 1;
        b.density = 3.0 * std::pow(b.p_center, -1.5);
        d.bins.push_back(b);
    }
    const PowerLawFit f = power_law_fit(d, 1e-9, 1e-2);
    EXPECT_NEAR(f.zeta, 0.5, 1e-6);
    EXPECT_NEAR(f.c, 3.0, 1e-6);
    EXPECT_NEAR(f.r2, 1.0, 1e-9);
}

TEST(PowerLaw, SixRungExponentInRange) {
    const PowerLawFit f = power_law_fit(density_of_probability(six_rung()), 1e-6, 1e-2);
    EXPECT_GE(f.zeta, 0.0);
    EXPECT_LE(f.zeta, 0.5);
}

TEST(PowerLaw, EqualProbabilitiesRejected) {
    std::vector<ProbEntry> e;
    for (Bits b = 0; b < 8; ++b) e.push_back({b, 0.125});
    EXPECT_THROW(power_law_fit(density_of_probability(ProbDist(3, e)), 1e-26, 1.0), NumericalError);
}

TEST(MaxProb, ZeroDriveLimitIsClassical) {
    std::vector<LadderSystem> systems;
    for (int n = 2; n <= 4; ++n) {
        LadderSystem s = build_system(n, 4.1, 2.35, -1.0);
        s.omega *= 1e-4;
        systems.push_back(s);
    }
    for (const auto& pt : max_prob_series(systems)) EXPECT_NEAR(pt.p_max, 1.0, 1e-4);
}

TEST(ExpDecay, NoiselessRecovery) {
    std::vector<MaxProbPoint> s;
    for (int n = 2; n <= 9; ++n) s.push_back({n, 0.5 * std::exp(-0.1 * n)});
    const ExpDecayFit f = exp_decay_fit(s);
    EXPECT_NEAR(f.amplitude, 0.5, 1e-12);
    EXPECT_NEAR(f.k, 0.1, 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(ExpDecay, TwoPointsAnalytic) {
    const std::vector<MaxProbPoint> s = {{4, 0.3}, {7, 0.12}};
    const ExpDecayFit f = exp_decay_fit(s);
    const double k = std::log(0.3 / 0.12) / 3.0;
    EXPECT_NEAR(f.k, k, 1e-12);
    EXPECT_NEAR(f.amplitude, 0.3 * std::exp(4 * k), 1e-12);
}

TEST(ExpDecay, ModThreeSelectsClass) {
    std::vector<MaxProbPoint> s;
    for (int n = 2; n <= 10; ++n) s.push_back({n, (n % 3 == 2 ? 0.8 : 0.2) * std::exp(-0.2 * n)});
    const ExpDecayFit f = exp_decay_fit(s, 2);
    EXPECT_EQ(f.n_points, 3);
    EXPECT_NEAR(f.amplitude, 0.8, 1e-12);
    EXPECT_NEAR(f.k, 0.2, 1e-12);
    EXPECT_THROW(exp_decay_fit(std::vector<MaxProbPoint>{{4, 0.1}}), NumericalError);
}

}  // namespace
}  // namespace rydladder
