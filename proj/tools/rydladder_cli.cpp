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


#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

using namespace rydladder;
using namespace rydladder::cli;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitData = 4;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> n_rungs;
    std::optional<double> a_um;
    std::optional<double> rb_over_a;
    std::optional<double> delta_over_omega;
    std::optional<double> c6_mhz_um6;
    std::optional<int> threads;
    std::optional<std::uint64_t> shots;
    std::optional<std::string> schedule;
    std::optional<std::string> schedule_file;
    std::optional<double> dt_us;
    std::optional<double> ramp_time_us;
    std::optional<std::string> partition;
    std::optional<std::string> four_region_partition;
    std::optional<double> filter_p_min;
    std::optional<std::vector<std::string>> observables;
};

template <typename T>
void apply(const std::optional<T>& v, T& field) {
    if (v) field = *v;
}

Context resolve(const Overrides& o, const std::string& command) {
    Context ctx;
    ctx.command = command;
    ctx.cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    RunConfig& c = ctx.cfg;
    apply(o.seed, c.seed);
    apply(o.n_rungs, c.n_rungs);
    apply(o.a_um, c.a_um);
    apply(o.rb_over_a, c.rb_over_a);
    apply(o.delta_over_omega, c.delta_over_omega);
    apply(o.c6_mhz_um6, c.c6_mhz_um6);
    apply(o.threads, c.threads);
    apply(o.shots, c.n_shots);
    apply(o.schedule, c.schedule);
    apply(o.schedule_file, c.schedule_file);
    apply(o.dt_us, c.dt_us);
    apply(o.ramp_time_us, c.ramp_time_us);
    apply(o.partition, c.partition);
    apply(o.four_region_partition, c.four_region_partition);
    apply(o.filter_p_min, c.filter_p_min);
    apply(o.observables, c.observables);
    if (!o.out.empty()) c.out_dir = o.out;
    c.validate();
    ctx.out = c.out_dir;
    return ctx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg ladder entanglement toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Overrides o;
    app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--n-rungs", o.n_rungs, "Number of rungs");
    app.add_option("--a-um", o.a_um, "Lattice spacing in um");
    app.add_option("--rb-over-a", o.rb_over_a, "Blockade radius over spacing");
    app.add_option("--delta-over-omega", o.delta_over_omega, "Detuning over Rabi frequency");
    app.add_option("--c6", o.c6_mhz_um6, "Van der Waals constant in MHz um^6 (cyclic)");
    app.add_option("--threads", o.threads, "Worker threads for scans");

    std::string input;
    bool noise = false;
    int min_rungs = 4;
    int max_rungs = 10;
    std::string id;

    auto* groundstate = app.add_subcommand("groundstate", "Exact ground-state distribution and entropies");
    auto* sample_cmd = app.add_subcommand("sample", "Draw shots from a distribution");
    sample_cmd->add_option("--input", input, "Probability or count CSV (default: exact ground state)");
    sample_cmd->add_option("--shots", o.shots, "Number of shots");
    sample_cmd->add_flag("--readout-noise", noise, "Apply the readout error model to the shots");
    auto* ingest = app.add_subcommand("ingest", "Post-select hardware shots into counts");
    ingest->add_option("--input", input, "Shot file (NDJSON or task result)")->required();
    auto* estimate = app.add_subcommand("estimate", "Filtered mutual-information estimate");
    estimate->add_option("--input", input, "Probability CSV, count CSV or shot file (default: exact)");
    estimate->add_option("--partition", o.partition, "Two-class per-atom labels");
    auto* cumulative_cmd = app.add_subcommand("cumulative", "Cumulative probability curve");
    cumulative_cmd->add_option("--input", input, "Probability CSV, count CSV or shot file (default: exact)");
    auto* density = app.add_subcommand("density", "Log-binned density of probability and power-law fit");
    density->add_option("--input", input, "Probability CSV, count CSV or shot file (default: exact)");
    auto* maxprob = app.add_subcommand("maxprob", "Largest probability against size with exponential fits");
    maxprob->add_option("--min-rungs", min_rungs, "Smallest size")->capture_default_str();
    maxprob->add_option("--max-rungs", max_rungs, "Largest size")->capture_default_str();
    auto* evolve = app.add_subcommand("evolve", "Trotterized ramp from the all-ground state");
    evolve->add_option("--schedule", o.schedule, "ramp4us, ramp4us_modified or ramp12us");
    evolve->add_option("--schedule-file", o.schedule_file, "Schedule JSON");
    evolve->add_option("--dt", o.dt_us, "Time step in us");
    auto* rampdown = app.add_subcommand("rampdown", "Linear ramp of the drive to zero");
    rampdown->add_option("--ramp-time", o.ramp_time_us, "Ramp duration in us");
    auto* mitigate = app.add_subcommand("mitigate", "Readout-error mitigation of counts");
    mitigate->add_option("--input", input, "Count CSV or shot file")->required();
    auto* weakmono = app.add_subcommand("weakmono", "Weak monotonicity combinations");
    weakmono->add_option("--input", input, "Probability CSV, count CSV or shot file (default: exact)");
    weakmono->add_option("--partition", o.four_region_partition, "Four-class per-atom labels");
    weakmono->add_option("--filter", o.filter_p_min, "Also evaluate after filtering below this probability");
    auto* scan = app.add_subcommand("scan", "Heatmaps over detuning and blockade ratio");
    scan->add_option("--observables", o.observables, "Observables to tabulate");
    scan->add_option("--partition", o.four_region_partition, "Four-class per-atom labels");
    auto* reproduce = app.add_subcommand("reproduce", "Figure and table recipes");
    reproduce->add_option("id", id, "fig3, fig4, fig5, fig6, table1, fig8, fig9, tables2-4, fig11, fig12")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        Context ctx = resolve(o, sub->get_name());
        if (sub == groundstate) return cmd_groundstate(ctx);
        if (sub == sample_cmd) return cmd_sample(ctx, input, noise);
        if (sub == ingest) return cmd_ingest(ctx, input);
        if (sub == estimate) return cmd_estimate(ctx, input);
        if (sub == cumulative_cmd) return cmd_cumulative(ctx, input);
        if (sub == density) return cmd_density(ctx, input);
        if (sub == maxprob) return cmd_maxprob(ctx, min_rungs, max_rungs);
        if (sub == evolve) return cmd_evolve(ctx);
        if (sub == rampdown) return cmd_rampdown(ctx);
        if (sub == mitigate) return cmd_mitigate(ctx, input);
        if (sub == weakmono) return cmd_weakmono(ctx, input);
        if (sub == scan) return cmd_scan(ctx);
        if (sub == reproduce) return cmd_reproduce(ctx, id);
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DataFormatError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
