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
#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rydladder/io.hpp"

namespace rydladder {
namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "rydladder_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

TEST(Config, RoundTrip) {
    RunConfig c;
    c.n_rungs = 8;
    c.rb_over_a = 2.0;
    c.partition = "AAAABBBBBBBBAAAA";
    c.observables = {"svn_half", "weak_mi"};
    c.seed = 99;
    c.explicit_drive = true;
    c.omega_mhz = 1.5;
    c.delta_mhz = -0.25;
    const RunConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
    EXPECT_EQ(back.partition, c.partition);
    EXPECT_EQ(back.observables, c.observables);
    EXPECT_EQ(config_to_json(c, -1).find('\n'), std::string::npos);
}

TEST(Config, FileRoundTrip) {
    RunConfig c;
    c.dt_us = 0.005;
    const auto path = temp_file("config.json");
    save_config(path, c);
    EXPECT_DOUBLE_EQ(load_config(path).dt_us, 0.005);
}

TEST(Config, PartialJsonKeepsDefaults) {
    const RunConfig c = config_from_json(R"({"n_rungs": 4})");
    EXPECT_EQ(c.n_rungs, 4);
    EXPECT_DOUBLE_EQ(c.rb_over_a, RunConfig{}.rb_over_a);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(config_from_json(R"({"n_rung": 4})"), ParameterError);
    EXPECT_THROW(config_from_json(R"({"n_rungs": "four"})"), ParameterError);
    EXPECT_THROW(config_from_json(R"({"n_rungs": 0})"), ParameterError);
    EXPECT_THROW(config_from_json(R"({"density_bins": 1})"), ParameterError);
    EXPECT_THROW(config_from_json(R"({"p10": 0.6})"), ParameterError);
    EXPECT_THROW(config_from_json(R"({"schedule": "ramp5us"})"), ParameterError);
    EXPECT_THROW(config_from_json(R"({"explicit_drive": true, "omega_mhz": -1.0})"), ParameterError);
    EXPECT_THROW(config_from_json("[1, 2]"), ParameterError);
    EXPECT_THROW(config_from_json("{"), ParameterError);
}

TEST(Config, SystemUsesCyclicUnits) {
    RunConfig c;
    const LadderSystem s = c.system();
    EXPECT_NEAR(s.c6, default_c6(), 1e-6 * default_c6());
    EXPECT_NEAR(s.blockade_radius() / s.a, c.rb_over_a, 1e-12);
    c.explicit_drive = true;
    c.omega_mhz = 0.0;
    c.delta_mhz = 2.0;
    const LadderSystem z = c.system();
    EXPECT_DOUBLE_EQ(z.omega, 0.0);
    EXPECT_DOUBLE_EQ(z.delta, kTwoPi * 2.0);
}

TEST(Bitstring, AtomZeroFirst) {
    EXPECT_EQ(to_bitstring(0b0011, 4), "1100");
    EXPECT_EQ(parse_bitstring("1100"), Bits{0b0011});
    EXPECT_EQ(parse_bitstring(to_bitstring(0xABCDEFu, 24)), Bits{0xABCDEFu});
    EXPECT_THROW(parse_bitstring("10x1"), DataFormatError);
    EXPECT_THROW(parse_bitstring(""), DataFormatError);
}

TEST(ProbDistCsv, RoundTripIsExact) {
    std::mt19937_64 rng(4);
    const ProbDist p = ProbDist::from_state(oracle::random_sparse_state(10, rng));
    std::stringstream ss;
    write_probdist_csv(ss, p, {{"command", "test"}});
    const ProbDist q = read_probdist_csv(ss);
    ASSERT_EQ(q.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_EQ(q.entries()[i].bits, p.entries()[i].bits);
        EXPECT_EQ(q.entries()[i].p, p.entries()[i].p);
    }
}

TEST(ProbDistCsv, RejectsMalformed) {
    const auto parse = [](const std::string& text) {
        std::istringstream is(text);
        return read_probdist_csv(is);
    };
    EXPECT_THROW(parse("bits,p\n01,1\n"), DataFormatError);
    EXPECT_THROW(parse("bitstring,probability\n"), DataFormatError);
    EXPECT_THROW(parse("bitstring,probability\n01,0.5\n1,0.5\n"), DataFormatError);
    EXPECT_THROW(parse("bitstring,probability\n01,0.5\n10,0.2\n"), DataFormatError);
    EXPECT_THROW(parse("bitstring,probability\n01,-0.5\n10,1.5\n"), DataFormatError);
    EXPECT_THROW(parse("bitstring,probability\n01,abc\n"), DataFormatError);
    EXPECT_NO_THROW(parse("# note: x\nbitstring,probability\n01,0.5\n10,0.5\n"));
}

TEST(CountsCsv, RoundTrip) {
    const CountTable c{4, {{0b0001, 3}, {0b1010, 7}}};
    std::stringstream ss;
    write_counts_csv(ss, c);
    const CountTable back = read_counts_csv(ss);
    EXPECT_EQ(back.n_atoms, 4);
    EXPECT_EQ(back.counts, c.counts);
    std::istringstream bad("bitstring,count\n0101,1.5\n");
    EXPECT_THROW(read_counts_csv(bad), DataFormatError);
}

TEST(Shots, NdjsonRoundTrip) {
    const std::vector<ShotRecord> shots{{{1, 1, 1}, {0, 1, 0}}, {{1, 0, 1}, {1, 1, 1}}};
    std::stringstream ss;
    write_shots_ndjson(ss, shots);
    const auto back = read_shots_ndjson(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].pre_sequence, shots[1].pre_sequence);
    EXPECT_EQ(back[0].post_sequence, shots[0].post_sequence);
    std::istringstream bad(R"({"pre_sequence": [1, 2], "post_sequence": [0, 1]})");
    EXPECT_THROW(read_shots_ndjson(bad), DataFormatError);
}

TEST(Shots, TaskResultLayout) {
    const std::string text = R"({"measurements": [
        {"shotResult": {"preSequence": [1, 1], "postSequence": [0, 1]}},
        {"shotResult": {"preSequence": [0, 1], "postSequence": [1, 1]}}]})";
    const auto shots = read_shots_task_result(text);
    ASSERT_EQ(shots.size(), 2u);
    EXPECT_EQ(shots[0].post_sequence, (std::vector<std::uint8_t>{0, 1}));
    const auto path = temp_file("task.json");
    write_text(path, text);
    EXPECT_EQ(read_shots(path).size(), 2u);
    const PostSelection s = postselect(shots, true);
    EXPECT_EQ(s.kept, 1u);
    EXPECT_EQ(s.counts.counts.at(0b01), 1u);
    EXPECT_THROW(read_shots_task_result(R"({"results": []})"), DataFormatError);
}

TEST(Shots, EmptyFileRejected) {
    const auto path = temp_file("empty.ndjson");
    write_text(path, "\n");
    EXPECT_THROW(read_shots(path), DataFormatError);
    write_text(path, R"({"measurements": []})");
    EXPECT_THROW(read_shots(path), DataFormatError);
    EXPECT_THROW(read_text(temp_file("missing.json")), DataFormatError);
}

TEST(Schedule, JsonInCyclicMegahertz) {
    const RampSchedule s = schedule_from_json(R"({"omega": [[0, 0], [1, 2], [2, 0]], "delta": [[0, -1], [2, 1]]})");
    EXPECT_DOUBLE_EQ(s.t_final, 2.0);
    EXPECT_NEAR(s.omega(1.0), kTwoPi * 2.0, 1e-12);
    EXPECT_NEAR(s.delta(1.0), 0.0, 1e-12);
    const RampSchedule back = schedule_from_json(schedule_to_json(s));
    EXPECT_NEAR(back.omega(0.5), s.omega(0.5), 1e-12);
    EXPECT_THROW(schedule_from_json(R"({"omega": [[0, 0]]})"), ParameterError);
    EXPECT_THROW(schedule_from_json(R"({"omega": [[0, 0, 1]], "delta": [[0, 0]]})"), ParameterError);
}

TEST(FiltrationCsv, InvalidPointsAreNan) {
    FiltrationCurve c;
    c.points.push_back({1e-3, 0.5, 0.25, 4, true});
    c.points.push_back({0.9, 0.0, 0.0, 0, false});
    std::stringstream ss;
    write_filtration_csv(ss, c);
    const std::string text = ss.str();
    EXPECT_NE(text.find("p_min,i_ab,s_cond,survivors,valid"), std::string::npos);
    EXPECT_NE(text.find("nan,nan,0,0"), std::string::npos);
}

}  // namespace
}  // namespace rydladder
