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
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rydladder/io.hpp"

namespace rydladder::cli {

using Json = nlohmann::ordered_json;

struct Context {
    RunConfig cfg;
    std::filesystem::path out;
    std::string command;
};

/// Value rounded to 6 significant digits.
double round6(double x);
/// Rounded value, or null when not finite.
Json number(double x);

/// Creates the output directory and writes the resolved config into it.
void begin(const Context& ctx);
/// Header lines embedded in every CSV: command and the resolved config.
Metadata metadata(const Context& ctx);
std::filesystem::path output(const Context& ctx, std::string_view name);
void write_json(const Context& ctx, std::string_view name, const Json& j);
void write_csv(const Context& ctx, std::string_view name, const std::function<void(std::ostream&)>& body);

void write_probdist(const Context& ctx, std::string_view name, const ProbDist& p);
void write_cumulative(const Context& ctx, std::string_view name, const CumulativeCurve& c);

enum class InputKind { probdist, counts, shots };

struct LoadedInput {
    InputKind kind = InputKind::probdist;
    ProbDist dist;
    std::optional<CountTable> counts;
    std::optional<PostSelection> selection;
};

/// Reads a probability CSV, a count CSV or a shot file; shot files are
/// post-selected with the configured convention.
LoadedInput load_input(const std::filesystem::path& path, const RunConfig& cfg);

struct ExactRun {
    LadderSystem system;
    GroundState gs;
    ProbDist dist;
};

ExactRun solve(const RunConfig& cfg);

/// Entanglement estimate as one report row.
Json estimate_row(std::string_view method, const EntanglementEstimate& e);

struct Check {
    std::string name;
    double value = 0.0;
    std::string target;
    bool pass = false;
};

Json checks_json(const std::vector<Check>& checks);

int cmd_groundstate(Context& ctx);
int cmd_sample(Context& ctx, const std::string& input, bool readout_noise);
int cmd_ingest(Context& ctx, const std::string& input);
int cmd_estimate(Context& ctx, const std::string& input);
int cmd_cumulative(Context& ctx, const std::string& input);
int cmd_density(Context& ctx, const std::string& input);
int cmd_maxprob(Context& ctx, int min_rungs, int max_rungs);
int cmd_evolve(Context& ctx);
int cmd_rampdown(Context& ctx);
int cmd_mitigate(Context& ctx, const std::string& input);
int cmd_weakmono(Context& ctx, const std::string& input);
int cmd_scan(Context& ctx);

std::vector<std::string> reproduce_ids();
int cmd_reproduce(Context& ctx, const std::string& id);

}  // namespace rydladder::cli
