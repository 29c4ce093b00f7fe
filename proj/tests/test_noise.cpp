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
#include "rydladder/noise.hpp"

namespace rydladder {
namespace {

const ProbDist& six_rung() {
    static const ProbDist p = ProbDist::from_state(ground_state(build_system(6, 4.1, 2.35, 3.5)).psi);
    return p;
}

const std::vector<std::pair<int, double>> kPresequenceSeries = {
    {12, 0.730}, {16, 0.763}, {20, 0.734}, {24, 0.694}, {28, 0.686}, {32, 0.661}, {36, 0.562}};

TEST(ReadoutModel, Validation) {
    EXPECT_NO_THROW((ReadoutModel{0.0, 0.49}).validate());
    EXPECT_THROW((ReadoutModel{0.5, 0.1}).validate(), ParameterError);
    EXPECT_THROW((ReadoutModel{-0.1, 0.1}).validate(), ParameterError);
    EXPECT_NO_THROW((ReadoutModel{0.0, 1.0}).validate_channel());
    const ReadoutModel m;
    EXPECT_DOUBLE_EQ(m.confusion(1, 0), 0.01);
    EXPECT_DOUBLE_EQ(m.confusion(0, 1), 0.08);
    EXPECT_DOUBLE_EQ(m.confusion(1, 1), 0.92);
}

TEST(ReadoutNoise, NoiselessIsIdentity) {
    const CountTable c = sample(six_rung(), 2000, 3);
    EXPECT_EQ(apply_readout_noise(c, {0.0, 0.0}, 5).counts, c.counts);
}

TEST(ReadoutNoise, CertainDecayEmptiesEveryAtom) {
    const CountTable c{4, {{0b1111, 1}}};
    const CountTable out = apply_readout_noise(c, {0.0, 1.0}, 1);
    EXPECT_EQ(out.counts.size(), 1u);
    EXPECT_EQ(out.counts.at(0), 1u);
}

TEST(ReadoutNoise, PreservesShotsAndMatchesAnalyticChannel) {
    const std::uint64_t n = 200000;
    const ReadoutModel m;
    const CountTable noisy = apply_readout_noise(sample(six_rung(), n, 17), m, 18);
    EXPECT_EQ(noisy.n_shots(), n);
    const ProbDist channel = apply_readout_channel(six_rung(), m);
    std::vector<ProbEntry> top(channel.entries().begin(), channel.entries().end());
    std::sort(top.begin(), top.end(), [](const ProbEntry& a, const ProbEntry& b) { return a.p > b.p; });
    for (int i = 0; i < 10; ++i) {
        const auto it = noisy.counts.find(top[static_cast<std::size_t>(i)].bits);
        const double c = it == noisy.counts.end() ? 0.0 : static_cast<double>(it->second);
        const double p = top[static_cast<std::size_t>(i)].p;
        EXPECT_LT(std::abs(c - n * p), 5 * std::sqrt(n * p * (1 - p)));
    }
}

TEST(ReadoutChannel, MatchesPerStringProduct) {
    const ProbDist p(3, {{0b101, 0.6}, {0b010, 0.4}});
    const ReadoutModel m;
    const ProbDist q = apply_readout_channel(p, m);
    EXPECT_EQ(q.size(), 8u);
    for (Bits r = 0; r < 8; ++r) {
        double ref = 0.0;
        for (const auto& e : p.entries()) {
            double v = e.p;
            for (int k = 0; k < 3; ++k) v *= m.confusion((r >> k) & 1u, (e.bits >> k) & 1u);
            ref += v;
        }
        EXPECT_NEAR(q.probability(r), ref, 1e-15);
    }
}

TEST(M3, NoiselessModelReturnsInput) {
    const CountTable c = sample(six_rung(), 4405, 2);
    const QuasiDist q = m3_mitigate(c, {0.0, 0.0});
    const ProbDist p = counts_to_probdist(c);
    ASSERT_EQ(q.entries.size(), p.size());
    for (std::size_t i = 0; i < q.entries.size(); ++i) {
        EXPECT_EQ(q.entries[i].bits, p.entries()[i].bits);
        EXPECT_NEAR(q.entries[i].p, p.entries()[i].p, 1e-14);
    }
}

TEST(M3, SingleAtomAnalyticInversion) {
    const QuasiDist q = m3_mitigate(CountTable{1, {{1, 920}, {0, 80}}}, ReadoutModel{});
    ASSERT_EQ(q.entries.size(), 2u);
    EXPECT_NEAR(q.entries[0].p, 0.0, 1e-9);
    EXPECT_NEAR(q.entries[1].p, 1.0, 1e-9);
}

TEST(M3, MatchesDenseLuOracle) {
    const ReadoutModel m;
    const CountTable noisy = apply_readout_noise(sample(six_rung(), 4405, 21), m, 22);
    const ProbDist p = counts_to_probdist(noisy);
    std::vector<Bits> support;
    std::vector<double> b;
    for (const auto& e : p.entries()) {
        support.push_back(e.bits);
        b.push_back(e.p);
    }
    const std::vector<double> ref = oracle::dense_m3(support, b, 12, m);
    const QuasiDist q = m3_mitigate(noisy, m);
    ASSERT_EQ(q.entries.size(), support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        EXPECT_EQ(q.entries[i].bits, support[i]);
        EXPECT_NEAR(q.entries[i].p, ref[i], 1e-8);
    }
    EXPECT_NEAR(q.sum(), 1.0, 1e-6);
    EXPECT_LE(q.residual, 1e-8);
}

TEST(M3, ChannelRoundTrip) {
    const ProbDist truth = ProbDist::from_state(ground_state(build_system(3, 4.1, 2.35, 3.5)).psi);
    const ReadoutModel m;
    const QuasiDist q = m3_mitigate(apply_readout_channel(truth, m), m);
    for (const auto& e : q.entries) EXPECT_NEAR(e.p, truth.probability(e.bits), 1e-7);
}

TEST(M3, ClippingReportsNegativeMass) {
    QuasiDist q;
    q.n_atoms = 2;
    q.entries = {{0, 0.7}, {1, 0.5}, {2, -0.2}};
    EXPECT_NEAR(q.clipped_mass(), 0.2, 1e-15);
    const ProbDist c = q.clipped();
    EXPECT_EQ(c.size(), 2u);
    EXPECT_NEAR(c.probability(0), 0.7 / 1.2, 1e-15);
}

TEST(M3, NonConvergenceRaisesWithResidual) {
    M3Options o;
    o.max_iterations = 1;
    o.restart = 1;
    o.tol = 1e-15;
    const CountTable noisy = apply_readout_noise(sample(six_rung(), 4405, 21), ReadoutModel{}, 22);
    try {
        m3_mitigate(noisy, ReadoutModel{}, o);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_GT(e.residual(), 1e-15);
    }
}

TEST(M3, EmptyCountsRejected) { EXPECT_THROW(m3_mitigate(CountTable{3, {}}, ReadoutModel{}), ParameterError); }

TEST(M3, ReducesTotalVariationAcrossSeeds) {
    const ReadoutModel m;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CountTable clean = sample(six_rung(), 4405, seed);
        const CountTable noisy = apply_readout_noise(clean, m, 100 + seed);
        const QuasiDist q = m3_mitigate(noisy, m);
        ASSERT_EQ(q.entries.size(), noisy.counts.size());
        EXPECT_LT(total_variation(six_rung(), q.clipped()), total_variation(six_rung(), counts_to_probdist(noisy)));
    }
}

TEST(Depletion, ReferenceFactors) {
    const ReadoutModel m;
    EXPECT_NEAR(depletion_factor(0b000000001111, 12, m), 0.66, 0.005);
    EXPECT_NEAR(depletion_factor(0b000000000111, 12, m), 0.71, 0.005);
    EXPECT_DOUBLE_EQ(depletion_factor(0b1111, 12, {0.0, 0.0}), 1.0);
    EXPECT_NEAR(depletion_factor(0b1111, 12, m), std::pow(0.92, 4) * std::pow(0.99, 8), 1e-15);
}

TEST(Depletion, UniformOccupationIsPlainNormalization) {
    const CountTable c{4, {{0b0011, 30}, {0b0101, 50}, {0b1001, 20}}};
    const ProbDist d = depletion_mitigate(c, ReadoutModel{});
    const ProbDist p = counts_to_probdist(c);
    for (const auto& e : p.entries()) EXPECT_NEAR(d.probability(e.bits), e.p, 1e-15);
    const ProbDist plain = depletion_mitigate(CountTable{4, {{0b1, 3}, {0b111, 1}}}, {0.0, 0.0});
    EXPECT_NEAR(plain.probability(0b1), 0.75, 1e-15);
}

TEST(Depletion, RatioBoost) {
    const ReadoutModel m;
    const Bits four = 0b000000001111, three = 0b000000000111 << 4;
    const ProbDist d = depletion_mitigate(CountTable{12, {{four, 100}, {three, 100}}}, m);
    EXPECT_NEAR(d.probability(four) / d.probability(three), depletion_factor(three, 12, m) / depletion_factor(four, 12, m), 1e-12);
}

TEST(Depletion, ApproximatesChannelForTopStrings) {
    const ReadoutModel m;
    const ProbDist noisy = apply_readout_channel(six_rung(), m);
    std::vector<ProbEntry> top(six_rung().entries().begin(), six_rung().entries().end());
    std::sort(top.begin(), top.end(), [](const ProbEntry& a, const ProbEntry& b) { return a.p > b.p; });
    for (int i = 0; i < 10; ++i) {
        const auto& e = top[static_cast<std::size_t>(i)];
        const double approx = e.p * depletion_factor(e.bits, 12, m);
        EXPECT_NEAR(noisy.probability(e.bits) / approx, 1.0, 0.05);
    }
}

TEST(PostSelect, AllCorrectKeepsEverything) {
    std::vector<ShotRecord> shots(3, ShotRecord{{1, 1, 1}, {0, 1, 1}});
    const PostSelection s = postselect(shots, true);
    EXPECT_EQ(s.kept, 3u);
    EXPECT_DOUBLE_EQ(s.sorting_fidelity, 1.0);
    EXPECT_EQ(s.counts.counts.at(0b001), 3u);
    const PostSelection d = postselect(shots, false);
    EXPECT_EQ(d.counts.counts.at(0b110), 3u);
}

TEST(PostSelect, FractionOfCorrectPresequences) {
    std::vector<ShotRecord> shots;
    for (int i = 0; i < 1000; ++i) {
        ShotRecord r{std::vector<std::uint8_t>(12, 1), std::vector<std::uint8_t>(12, 1)};
        if (i >= 730) r.pre_sequence[static_cast<std::size_t>(i % 12)] = 0;
        shots.push_back(r);
    }
    const PostSelection s = postselect(shots, true);
    EXPECT_EQ(s.kept, 730u);
    EXPECT_EQ(s.total, 1000u);
    EXPECT_DOUBLE_EQ(s.sorting_fidelity, 0.73);
}

TEST(PostSelect, RejectsInconsistentShots) {
    EXPECT_THROW(postselect(std::vector<ShotRecord>{}, true), ParameterError);
    const std::vector<ShotRecord> bad{{{1, 1}, {0, 1}}, {{1, 1, 1}, {0, 1, 1}}};
    EXPECT_THROW(postselect(bad, true), DataFormatError);
}

TEST(SortingFidelity, SyntheticRecovery) {
    std::vector<std::pair<int, double>> s;
    for (int n = 10; n <= 40; n += 5) s.push_back({n, std::pow(0.99, n)});
    EXPECT_NEAR(sorting_fidelity_fit(s).f, 0.99, 1e-6);
    EXPECT_NEAR(sorting_fidelity_fit(s, false).f, 0.99, 1e-6);
    EXPECT_THROW(sorting_fidelity_fit(std::vector<std::pair<int, double>>{{12, 0.7}}), ParameterError);
}

TEST(SortingFidelity, PresequenceSeries) {
    const SortingFidelityFit f = sorting_fidelity_fit(kPresequenceSeries);
    EXPECT_NEAR(f.f, 0.985, 0.005);
}

TEST(SortingFidelity, FourHundredAtomExtrapolation) {
    SortingFidelityFit f;
    f.f = 0.995;
    EXPECT_GE(f.keep_fraction(400), 0.13);
    EXPECT_LE(f.keep_fraction(400), 0.14);
}

}  // namespace
}  // namespace rydladder
