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


#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cli.hpp"

namespace rydladder::cli {

double round6(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

Json number(double x) { return std::isfinite(x) ? Json(round6(x)) : Json(nullptr); }

void begin(const Context& ctx) {
    std::filesystem::create_directories(ctx.out);
    save_config(ctx.out / "config.json", ctx.cfg);
}

Metadata metadata(const Context& ctx) { return {{"command", ctx.command}, {"config", config_to_json(ctx.cfg, -1)}}; }

std::filesystem::path output(const Context& ctx, std::string_view name) { return ctx.out / std::string(name); }

void write_json(const Context& ctx, std::string_view name, const Json& j) {
    write_text(output(ctx, name), j.dump(2) + "\n");
}

void write_csv(const Context& ctx, std::string_view name, const std::function<void(std::ostream&)>& body) {
    std::ostringstream os;
    body(os);
    write_text(output(ctx, name), os.str());
}

void write_probdist(const Context& ctx, std::string_view name, const ProbDist& p) {
    write_csv(ctx, name, [&](std::ostream& os) { write_probdist_csv(os, p, metadata(ctx)); });
}

void write_cumulative(const Context& ctx, std::string_view name, const CumulativeCurve& c) {
    write_csv(ctx, name, [&](std::ostream& os) {
        for (const auto& [k, v] : metadata(ctx)) os << "# " << k << ": " << v << '\n';
        os << "p_lambda,sigma\n" << std::setprecision(17);
        for (const auto& [p, s] : c.points) os << p << ',' << s << '\n';
    });
}

namespace {

std::string first_data_line(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        return line.substr(b, e - b + 1);
    }
    return {};
}

ProbDist input_or_exact(const std::string& input, const RunConfig& cfg) {
    if (input.empty()) return solve(cfg).dist;
    return load_input(input, cfg).dist;
}

}  // namespace

LoadedInput load_input(const std::filesystem::path& path, const RunConfig& cfg) {
    const std::string text = read_text(path);
    const std::string head = first_data_line(text);
    LoadedInput in;
    if (head.empty()) throw DataFormatError(path.string() + ": empty input");
    if (head == "bitstring,probability") {
        std::istringstream is(text);
        in.kind = InputKind::probdist;
        in.dist = read_probdist_csv(is);
        return in;
    }
    if (head == "bitstring,count") {
        std::istringstream is(text);
        in.kind = InputKind::counts;
        in.counts = read_counts_csv(is);
    } else if (head.front() == '{') {
        in.kind = InputKind::shots;
        const auto shots = read_shots(path);
        in.selection = postselect(shots, cfg.invert_post_sequence);
        if (in.selection->kept == 0) throw DataFormatError(path.string() + ": no shot passed post-selection");
        in.counts = in.selection->counts;
    } else {
        throw DataFormatError(path.string() + ": unrecognized input layout");
    }
    if (in.counts->n_shots() == 0) throw DataFormatError(path.string() + ": no counts");
    in.dist = counts_to_probdist(*in.counts);
    return in;
}

ExactRun solve(const RunConfig& cfg) {
    ExactRun run;
    run.system = cfg.system();
    run.gs = ground_state(run.system, cfg.ground_state_options());
    run.dist = ProbDist::from_state(run.gs.psi);
    return run;
}

Json estimate_row(std::string_view method, const EntanglementEstimate& e) {
    Json row;
    row["method"] = method;
    row["estimator"] = method_name(e.method);
    row["p_star"] = e.p_star > 0.0 ? number(e.p_star) : Json(nullptr);
    row["i_filtered"] = number(e.filtered);
    row["i_unfiltered"] = number(e.unfiltered);
    row["estimate"] = number(e.estimate);
    return row;
}

Json checks_json(const std::vector<Check>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"value", number(c.value)}, {"target", c.target}, {"pass", c.pass}});
    }
    return arr;
}

int cmd_groundstate(Context& ctx) {
    begin(ctx);
    const ExactRun run = solve(ctx.cfg);
    const Partition part = ctx.cfg.bipartition();
    const Bits a = part.class_mask(0);
    const Bits b = part.class_mask(1);
    const double s_a = marginal_entropy(run.dist, a);
    const double s_b = marginal_entropy(run.dist, b);
    const double s_ab = shannon_entropy(run.dist);
    write_probdist(ctx, "probdist.csv", run.dist);
    Json j;
    j["n_atoms"] = run.system.n_atoms();
    j["partition"] = part.labels();
    j["omega_mhz"] = number(run.system.omega / kTwoPi);
    j["delta_mhz"] = number(run.system.delta / kTwoPi);
    j["energy"] = number(run.gs.energy);
    j["first_excited"] = number(run.gs.first_excited);
    j["residual"] = run.gs.residual;
    j["matvecs"] = run.gs.matvecs;
    j["s_vn"] = number(entanglement_entropy(run.gs.psi, a));
    j["i_x"] = number(s_a + s_b - s_ab);
    j["s_a"] = number(s_a);
    j["s_b"] = number(s_b);
    j["s_ab"] = number(s_ab);
    j["p_max"] = number(run.dist.max_probability());
    write_json(ctx, "entropies.json", j);
    return 0;
}

int cmd_sample(Context& ctx, const std::string& input, bool readout_noise) {
    begin(ctx);
    const ProbDist p = input_or_exact(input, ctx.cfg);
    CountTable counts = sample(p, ctx.cfg.n_shots, ctx.cfg.seed);
    if (readout_noise) counts = apply_readout_noise(counts, ctx.cfg.readout(), ctx.cfg.seed + 1);
    write_csv(ctx, "counts.csv", [&](std::ostream& os) { write_counts_csv(os, counts, metadata(ctx)); });
    return 0;
}

int cmd_ingest(Context& ctx, const std::string& input) {
    begin(ctx);
    const auto shots = read_shots(input);
    const PostSelection sel = postselect(shots, ctx.cfg.invert_post_sequence);
    if (sel.kept == 0) throw DataFormatError(input + ": no shot passed post-selection");
    write_csv(ctx, "counts.csv", [&](std::ostream& os) { write_counts_csv(os, sel.counts, metadata(ctx)); });
    write_json(ctx, "ingest.json",
               {{"total", sel.total}, {"kept", sel.kept}, {"sorting_fidelity", number(sel.sorting_fidelity)},
                {"n_atoms", sel.counts.n_atoms}, {"distinct", sel.counts.counts.size()}});
    return 0;
}

int cmd_estimate(Context& ctx, const std::string& input) {
    begin(ctx);
    LoadedInput in;
    std::optional<double> s_vn;
    if (input.empty()) {
        const ExactRun run = solve(ctx.cfg);
        in.dist = run.dist;
        s_vn = entanglement_entropy(run.gs.psi, ctx.cfg.bipartition().class_mask(0));
    } else {
        in = load_input(input, ctx.cfg);
    }
    const Partition part = ctx.cfg.partition.empty() ? Partition::half_cut(in.dist.n_atoms() / 2)
                                                     : ctx.cfg.bipartition();
    if (part.n_atoms() != in.dist.n_atoms()) throw ParameterError("partition does not match the input size");
    const EstimatorConfig est = ctx.cfg.estimator();

    Json rows = Json::array();
    auto add = [&](std::string_view method, const ProbDist& p) {
        const EntanglementEstimate e = estimate_entanglement(p, part, est);
        rows.push_back(estimate_row(method, e));
        write_csv(ctx, "filtration_" + std::string(method) + ".csv",
                  [&](std::ostream& os) { write_filtration_csv(os, e.curve, metadata(ctx)); });
    };
    add("raw", in.dist);
    Json report;
    report["n_atoms"] = in.dist.n_atoms();
    report["partition"] = part.labels();
    if (s_vn) report["s_vn"] = number(*s_vn);
    if (in.counts) {
        const QuasiDist q = m3_mitigate(*in.counts, ctx.cfg.readout(), ctx.cfg.m3_options());
        add("m3", q.clipped());
        add("depletion", depletion_mitigate(*in.counts, ctx.cfg.readout()));
        report["n_shots"] = in.counts->n_shots();
        report["m3"] = {{"support", q.entries.size()}, {"residual", q.residual}, {"clipped_mass", number(q.clipped_mass())}};
    }
    if (in.selection) {
        report["post_selection"] = {{"total", in.selection->total}, {"kept", in.selection->kept}};
    }
    report["rows"] = rows;
    write_json(ctx, "report.json", report);
    return 0;
}

int cmd_cumulative(Context& ctx, const std::string& input) {
    begin(ctx);
    write_cumulative(ctx, "cumulative.csv", cumulative(input_or_exact(input, ctx.cfg)));
    return 0;
}

int cmd_density(Context& ctx, const std::string& input) {
    begin(ctx);
    const ProbDist p = input_or_exact(input, ctx.cfg);
    const DensityEstimate d = density_of_probability(p, ctx.cfg.binning());
    write_csv(ctx, "density.csv", [&](std::ostream& os) {
        for (const auto& [k, v] : metadata(ctx)) os << "# " << k << ": " << v << '\n';
        os << "p_center,dp,count,mass,density\n" << std::setprecision(6);
        for (const auto& b : d.bins) os << b.p_center << ',' << b.dp << ',' << b.count << ',' << b.mass << ',' << b.density << '\n';
    });
    Json j;
    j["bins"] = d.bins.size();
    try {
        const PowerLawFit f = power_law_fit(d, ctx.cfg.fit_p_lo, ctx.cfg.fit_p_hi);
        j["fit"] = {{"C", number(f.c)}, {"zeta", number(f.zeta)}, {"r2", number(f.r2)}, {"n_points", f.n_points},
                    {"p_lo", f.p_lo}, {"p_hi", f.p_hi}};
    } catch (const NumericalError& e) {
        j["fit"] = nullptr;
        j["error"] = e.what();
    }
    write_json(ctx, "powerlaw.json", j);
    return 0;
}

int cmd_maxprob(Context& ctx, int min_rungs, int max_rungs) {
    if (min_rungs < 1 || max_rungs < min_rungs) throw ParameterError("maxprob: need 1 <= min_rungs <= max_rungs");
    begin(ctx);
    std::vector<LadderSystem> systems;
    for (int n = min_rungs; n <= max_rungs; ++n) {
        RunConfig c = ctx.cfg;
        c.n_rungs = n;
        systems.push_back(c.system());
    }
    const auto series = max_prob_series(systems, ctx.cfg.ground_state_options());
    write_csv(ctx, "maxprob.csv", [&](std::ostream& os) {
        for (const auto& [k, v] : metadata(ctx)) os << "# " << k << ": " << v << '\n';
        os << "n_rungs,p_max\n" << std::setprecision(17);
        for (const auto& s : series) os << s.n_rungs << ',' << s.p_max << '\n';
    });
    auto fit_json = [&](std::optional<int> cls) -> Json {
        try {
            const ExpDecayFit f = exp_decay_fit(series, cls);
            return {{"A", number(f.amplitude)}, {"k", number(f.k)}, {"r2", number(f.r2)}, {"n_points", f.n_points}};
        } catch (const NumericalError&) {
            return nullptr;
        } catch (const ParameterError&) {
            return nullptr;
        }
    };
    write_json(ctx, "fits.json",
               {{"rb_over_a", ctx.cfg.rb_over_a}, {"min_rungs", min_rungs}, {"max_rungs", max_rungs},
                {"all", fit_json(std::nullopt)}, {"mod3_0", fit_json(0)}, {"mod3_1", fit_json(1)}, {"mod3_2", fit_json(2)}});
    return 0;
}

namespace {

RampSchedule configured_schedule(const RunConfig& cfg, const LadderSystem& sys) {
    if (!cfg.schedule_file.empty()) return schedule_from_json(read_text(cfg.schedule_file));
    return schedule_standard(parse_schedule(cfg.schedule), sys.omega, sys.delta);
}

}  // namespace

int cmd_evolve(Context& ctx) {
    begin(ctx);
    const ExactRun target = solve(ctx.cfg);
    const RampSchedule sched = configured_schedule(ctx.cfg, target.system);
    const EvolutionResult res = trotter_evolve(target.system, sched, ctx.cfg.dt_us,
                                               PureState::basis(target.system.n_atoms(), 0), ctx.cfg.checkpoint_every,
                                               ctx.cfg.ground_state_options());
    write_csv(ctx, "evolution.csv", [&](std::ostream& os) {
        for (const auto& [k, v] : metadata(ctx)) os << "# " << k << ": " << v << '\n';
        os << "t,fidelity,ok\n" << std::setprecision(6);
        for (const auto& c : res.checkpoints) os << c.t << ',' << c.fidelity << ',' << (c.ok ? 1 : 0) << '\n';
    });
    const ProbDist final_dist = ProbDist::from_state(res.psi_final);
    write_probdist(ctx, "final_probdist.csv", final_dist);
    write_json(ctx, "evolve.json",
               {{"t_final", sched.t_final}, {"dt", res.dt}, {"steps", res.steps},
                {"fidelity_to_target", number(fidelity(res.psi_final, target.gs.psi))},
                {"tv_to_target", number(total_variation(final_dist, target.dist))}});
    return 0;
}

int cmd_rampdown(Context& ctx) {
    begin(ctx);
    const ExactRun run = solve(ctx.cfg);
    const PureState ramped = rampdown_evolve(run.system, run.gs.psi, ctx.cfg.ramp_time_us, ctx.cfg.rampdown_dt_us);
    const ProbDist p = ProbDist::from_state(ramped);
    write_probdist(ctx, "rampdown_probdist.csv", p);
    write_json(ctx, "rampdown.json",
               {{"ramp_time", ctx.cfg.ramp_time_us}, {"tv_to_ideal", number(total_variation(p, run.dist))}});
    return 0;
}

int cmd_mitigate(Context& ctx, const std::string& input) {
    begin(ctx);
    const LoadedInput in = load_input(input, ctx.cfg);
    if (!in.counts) throw DataFormatError(input + ": mitigation needs counts or shots");
    const ReadoutModel model = ctx.cfg.readout();
    const QuasiDist q = m3_mitigate(*in.counts, model, ctx.cfg.m3_options());
    write_csv(ctx, "quasi.csv", [&](std::ostream& os) { write_quasi_csv(os, q, metadata(ctx)); });
    write_probdist(ctx, "m3_probdist.csv", q.clipped());
    write_probdist(ctx, "depletion_probdist.csv", depletion_mitigate(*in.counts, model));
    write_json(ctx, "mitigation.json",
               {{"n_shots", q.n_shots}, {"support", q.entries.size()}, {"residual", q.residual},
                {"iterations", q.iterations}, {"clipped_mass", number(q.clipped_mass())}});
    return 0;
}

int cmd_weakmono(Context& ctx, const std::string& input) {
    begin(ctx);
    const RunConfig& cfg = ctx.cfg;
    Json j;
    std::optional<ExactRun> run;
    ProbDist p;
    if (input.empty()) {
        run = solve(cfg);
        p = run->dist;
    } else {
        p = load_input(input, cfg).dist;
    }
    const Partition part = cfg.four_region_partition.empty() ? Partition::four_region(p.n_atoms() / 2)
                                                             : Partition(cfg.four_region_partition);
    part.require_classes(4);
    if (part.n_atoms() != p.n_atoms()) throw ParameterError("four-region partition does not match the input size");
    j["partition"] = part.labels();
    if (run) j["vn"] = number(weak_monotonicity_vn(run->gs.psi, part));
    j["mi"] = number(weak_monotonicity_mi(p, part));
    j["mi_complement"] = number(weak_monotonicity_mi_complement(p, part));
    if (cfg.filter_p_min > 0.0) {
        j["filter_p_min"] = cfg.filter_p_min;
        j["mi_filtered"] = number(weak_monotonicity_mi(filter(p, cfg.filter_p_min), part));
    }
    write_json(ctx, "weakmono.json", j);
    return 0;
}

int cmd_scan(Context& ctx) {
    begin(ctx);
    const RunConfig& cfg = ctx.cfg;
    std::vector<Observable> obs;
    bool weak = false;
    for (const auto& name : cfg.observables) {
        obs.push_back(parse_observable(name));
        weak = weak || name.rfind("weak", 0) == 0;
    }
    ScanTemplate tmpl;
    tmpl.n_rungs = cfg.n_rungs;
    tmpl.a = cfg.a_um;
    tmpl.aspect_ratio = cfg.aspect_ratio;
    tmpl.c6 = kTwoPi * cfg.c6_mhz_um6;
    tmpl.four_region_labels = cfg.four_region_partition;
    if (weak && tmpl.four_region_labels.empty()) tmpl.four_region_labels = Partition::four_region(cfg.n_rungs).labels();
    const Heatmap map = scan_heatmap(cfg.scan, tmpl, obs, cfg.ground_state_options(), cfg.threads);
    for (Observable o : obs) {
        write_csv(ctx, "heatmap_" + std::string(observable_name(o)) + ".csv", [&](std::ostream& os) {
            for (const auto& [k, v] : metadata(ctx)) os << "# " << k << ": " << v << '\n';
            write_heatmap_csv(os, map, o);
        });
    }
    write_json(ctx, "scan.json", {{"observables", cfg.observables}, {"flagged", map.flagged}});
    return 0;
}

}  // namespace rydladder::cli
