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


#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>

#include "cli.hpp"

namespace rydladder::cli {

namespace {

/// Reference threshold band and filtered mutual information per size.
struct ReferenceEstimate {
    int n_rungs;
    double p_star;
    double p_star_unc;
    double i_ab;
};

constexpr ReferenceEstimate kReferenceEstimates[] = {
    {6, 1.09e-2, 0.06e-2, 0.85},
    {8, 1.01e-2, 0.08e-2, 0.749},
    {10, 5.01e-3, 0.36e-3, 1.26},
};

constexpr double kEstimateTolerance = 0.03;
constexpr double kMitigationAgreement = 0.05;

RunConfig with_rungs(const RunConfig& cfg, int n_rungs) {
    RunConfig c = cfg;
    c.n_rungs = n_rungs;
    c.partition.clear();
    c.four_region_partition.clear();
    return c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::string suffix(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << x;
    return os.str();
}

void estimate_checks(std::vector<Check>& checks, const ReferenceEstimate& ref, const EntanglementEstimate& e,
                     const std::string& label) {
    const double lo = ref.p_star - 2 * ref.p_star_unc;
    const double hi = ref.p_star + 2 * ref.p_star_unc;
    checks.push_back({label + " p_star", e.p_star, "[" + fmt(lo) + ", " + fmt(hi) + "]", e.p_star >= lo && e.p_star <= hi});
    checks.push_back({label + " I(p_star)", e.filtered, fmt(ref.i_ab) + " +- " + fmt(kEstimateTolerance),
                      std::abs(e.filtered - ref.i_ab) <= kEstimateTolerance});
}

Json summary(const std::string& id, const std::vector<Check>& checks, Json data) {
    const bool pass = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    return {{"id", id}, {"pass", pass}, {"checks", checks_json(checks)}, {"data", std::move(data)}};
}

void write_series_csv(const Context& ctx, const std::string& name, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
    write_csv(ctx, name, [&](std::ostream& os) {
        for (const auto& [k, v] : metadata(ctx)) os << "# " << k << ": " << v << '\n';
        os << header << '\n' << std::setprecision(6);
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
    });
}

Json fig3(const Context& ctx, std::vector<Check>& checks) {
    Json data = Json::object();
    for (const auto& ref : kReferenceEstimates) {
        const RunConfig c = with_rungs(ctx.cfg, ref.n_rungs);
        const ExactRun run = solve(c);
        const Partition part = c.bipartition();
        const EntanglementEstimate e = estimate_entanglement(run.dist, part, c.estimator());
        write_csv(ctx, "filtration_" + std::to_string(ref.n_rungs) + ".csv",
                  [&](std::ostream& os) { write_filtration_csv(os, e.curve, metadata(ctx)); });
        Json d = estimate_row("exact", e);
        d["s_vn"] = number(entanglement_entropy(run.gs.psi, part.class_mask(0)));
        try {
            const SigmoidFit f = sigmoid_inflection(e.curve);
            d["sigmoid"] = {{"c", number(f.c)}, {"amplitude", number(f.amplitude)}, {"x0", number(f.x0)},
                            {"width", number(f.width)}, {"rss", f.rss}};
        } catch (const FitError& err) {
            d["sigmoid"] = nullptr;
        }
        try {
            d["mid_height"] = number(mid_height_threshold(e.curve));
        } catch (const NumericalError&) {
            d["mid_height"] = nullptr;
        }
        data[std::to_string(ref.n_rungs)] = d;
        estimate_checks(checks, ref, e, std::to_string(ref.n_rungs) + " rungs");
    }
    return data;
}

Json fig4(const Context& ctx, std::vector<Check>& checks) {
    const RunConfig c = with_rungs(ctx.cfg, 6);
    const ProbDist exact = solve(c).dist;
    const CumulativeCurve ref = cumulative(exact);
    write_cumulative(ctx, "cumulative_exact.csv", ref);
    Json data;
    constexpr std::uint64_t kShots = 10000;
    std::size_t outside = 0;
    Json sups = Json::array();
    for (int i = 0; i < 3; ++i) {
        const CountTable counts = sample(exact, kShots, c.seed + static_cast<std::uint64_t>(i));
        write_cumulative(ctx, "cumulative_sample_" + std::to_string(i) + ".csv", cumulative(counts_to_probdist(counts)));
        for (const auto& e : exact.entries()) {
            const auto it = counts.counts.find(e.bits);
            const std::uint64_t n = it == counts.counts.end() ? 0 : it->second;
            if (!within_binomial_band(n, kShots, e.p)) ++outside;
        }
        sups.push_back(number(sup_distance(ref, cumulative(counts_to_probdist(counts)))));
    }
    checks.push_back({"strings outside 5 sigma bands (3 x 1e4 shots)", static_cast<double>(outside), "0", outside == 0});
    Json scaling = Json::array();
    std::size_t increasing = 0;
    for (int i = 0; i < 3; ++i) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
        std::vector<double> d;
        for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL}) {
            d.push_back(sup_distance(ref, cumulative(counts_to_probdist(sample(exact, n, seed)))));
            scaling.push_back({{"seed", seed}, {"shots", n}, {"sup_distance", number(d.back())}});
        }
        if (!(d[0] > d[1] && d[1] > d[2])) ++increasing;
    }
    checks.push_back({"seeds where sup distance fails to decrease over 1e3/1e4/1e5", static_cast<double>(increasing), "0",
                      increasing == 0});
    data["sup_distance_samples"] = sups;
    data["sup_distance_scaling"] = scaling;
    return data;
}

Json fig5(const Context& ctx, std::vector<Check>& checks) {
    const RunConfig c = with_rungs(ctx.cfg, 6);
    const ProbDist exact = solve(c).dist;
    const DensityEstimate d = density_of_probability(exact, c.binning());
    write_series_csv(ctx, "density_6.csv", "p_center,dp,count,mass,density", [&] {
        std::vector<std::vector<double>> rows;
        for (const auto& b : d.bins) rows.push_back({b.p_center, b.dp, static_cast<double>(b.count), b.mass, b.density});
        return rows;
    }());
    const PowerLawFit f = power_law_fit(d, c.fit_p_lo, c.fit_p_hi);
    checks.push_back({"bins", static_cast<double>(d.bins.size()), "50", d.bins.size() == 50});
    checks.push_back({"zeta", f.zeta, "[0, 0.5]", f.zeta >= 0.0 && f.zeta <= 0.5});
    return {{"C", number(f.c)}, {"zeta", number(f.zeta)}, {"r2", number(f.r2)}, {"n_points", f.n_points},
            {"p_lo", f.p_lo}, {"p_hi", f.p_hi}};
}

Json fit_json(const ExpDecayFit& f) {
    return {{"A", number(f.amplitude)}, {"k", number(f.k)}, {"r2", number(f.r2)}, {"n_points", f.n_points}};
}

/// Predicted P_max of two class fits differ by at least `ratio` at every size.
bool separated(const ExpDecayFit& a, const ExpDecayFit& b, int lo, int hi, double ratio) {
    for (int n = lo; n <= hi; ++n) {
        const double pa = a.amplitude * std::exp(-a.k * n);
        const double pb = b.amplitude * std::exp(-b.k * n);
        if (std::abs(std::log(pa / pb)) < std::log(ratio)) return false;
    }
    return true;
}

Json fig6(const Context& ctx, std::vector<Check>& checks) {
    constexpr int kLo = 4;
    constexpr int kHi = 10;
    Json data = Json::object();
    for (double rb : {2.0, 2.35, 3.0}) {
        std::vector<LadderSystem> systems;
        for (int n = kLo; n <= kHi; ++n) {
            RunConfig c = with_rungs(ctx.cfg, n);
            c.rb_over_a = rb;
            systems.push_back(c.system());
        }
        const auto series = max_prob_series(systems, ctx.cfg.ground_state_options());
        std::vector<std::vector<double>> rows;
        for (const auto& s : series) rows.push_back({static_cast<double>(s.n_rungs), s.p_max});
        write_series_csv(ctx, "maxprob_" + suffix(rb) + ".csv", "n_rungs,p_max", rows);
        Json d;
        const ExpDecayFit all = exp_decay_fit(series);
        d["all"] = fit_json(all);
        if (rb == 2.0) {
            bool monotone = true;
            for (std::size_t i = 1; i < series.size(); ++i) monotone = monotone && series[i].p_max < series[i - 1].p_max;
            checks.push_back({"rb 2.0 P_max decreasing", series.back().p_max, "monotone", monotone});
            checks.push_back({"rb 2.0 R^2", all.r2, ">= 0.9", all.r2 >= 0.9});
            checks.push_back({"rb 2.0 k", all.k, "0.364 +- 30%", std::abs(all.k - 0.364) <= 0.3 * 0.364});
        }
        if (rb == 2.35) {
            std::vector<ExpDecayFit> cls;
            for (int m = 0; m < 3; ++m) {
                cls.push_back(exp_decay_fit(series, m));
                d["mod3_" + std::to_string(m)] = fit_json(cls.back());
            }
            bool sep = true;
            for (int i = 0; i < 3; ++i) {
                for (int j = i + 1; j < 3; ++j) sep = sep && separated(cls[i], cls[j], kLo, kHi, 1.1);
            }
            checks.push_back({"rb 2.35 single-exponential R^2", all.r2, "< 0.9", all.r2 < 0.9});
            checks.push_back({"rb 2.35 mod-3 classes separated by >= 10%", sep ? 1.0 : 0.0, "1", sep});
        }
        data[suffix(rb)] = d;
    }
    return data;
}

Json fig8(const Context& ctx, std::vector<Check>& checks) {
    const RunConfig c = with_rungs(ctx.cfg, 5);
    const ExactRun target = solve(c);
    write_cumulative(ctx, "cumulative_target.csv", cumulative(target.dist));
    Json data;
    std::map<ScheduleKind, std::pair<double, ProbDist>> finals;
    for (ScheduleKind kind : {ScheduleKind::ramp4us, ScheduleKind::ramp4us_modified, ScheduleKind::ramp12us}) {
        const std::string name(schedule_name(kind));
        const RampSchedule sched = schedule_standard(kind, target.system.omega, target.system.delta);
        const EvolutionResult res = trotter_evolve(target.system, sched, c.dt_us, PureState::basis(target.system.n_atoms(), 0),
                                                   c.checkpoint_every, c.ground_state_options());
        std::vector<std::vector<double>> rows;
        for (const auto& cp : res.checkpoints) rows.push_back({cp.t, cp.fidelity, cp.ok ? 1.0 : 0.0});
        write_series_csv(ctx, "evolution_" + name + ".csv", "t,fidelity,ok", rows);
        const ProbDist p = ProbDist::from_state(res.psi_final);
        write_probdist(ctx, "final_" + name + ".csv", p);
        write_cumulative(ctx, "cumulative_" + name + ".csv", cumulative(p));
        const double f = fidelity(res.psi_final, target.gs.psi);
        data[name] = {{"fidelity_to_target", number(f)}, {"tv_to_target", number(total_variation(p, target.dist))}};
        finals.emplace(kind, std::make_pair(f, p));
    }
    const double f4 = finals.at(ScheduleKind::ramp4us).first;
    const double f12 = finals.at(ScheduleKind::ramp12us).first;
    const double tv = total_variation(finals.at(ScheduleKind::ramp4us).second, finals.at(ScheduleKind::ramp4us_modified).second);
    data["tv_ramp4us_vs_modified"] = number(tv);
    checks.push_back({"fidelity 12us - 4us", f12 - f4, "> 0", f12 > f4});
    checks.push_back({"TV(4us, 4us modified)", tv, "< 0.05", tv < 0.05});
    return data;
}

Json fig9(const Context& ctx, std::vector<Check>& checks) {
    const RunConfig c = with_rungs(ctx.cfg, 6);
    const ExactRun run = solve(c);
    write_cumulative(ctx, "cumulative_ideal.csv", cumulative(run.dist));
    double tv[2];
    const double times[2] = {0.05, 0.5};
    const char* names[2] = {"fast", "slow"};
    for (int i = 0; i < 2; ++i) {
        const ProbDist p = ProbDist::from_state(rampdown_evolve(run.system, run.gs.psi, times[i], c.rampdown_dt_us));
        write_cumulative(ctx, std::string("cumulative_") + names[i] + ".csv", cumulative(p));
        tv[i] = total_variation(p, run.dist);
    }
    checks.push_back({"TV fast - TV slow", tv[0] - tv[1], "< 0", tv[0] < tv[1]});
    return {{"tv_fast", number(tv[0])}, {"tv_slow", number(tv[1])}};
}

Json tables(const Context& ctx, std::vector<Check>& checks) {
    Json data = Json::object();
    for (const auto& ref : kReferenceEstimates) {
        const RunConfig c = with_rungs(ctx.cfg, ref.n_rungs);
        const ExactRun run = solve(c);
        const Partition part = c.bipartition();
        const ReadoutModel model = c.readout();
        const CountTable clean = sample(run.dist, c.n_shots, c.seed);
        const CountTable noisy = apply_readout_noise(clean, model, c.seed + 1);
        const QuasiDist q = m3_mitigate(noisy, model, c.m3_options());
        const std::string n = std::to_string(ref.n_rungs);
        Json rows = Json::array();
        std::map<std::string, double> estimate;
        auto add = [&](const std::string& method, const ProbDist& p) {
            const EntanglementEstimate e = estimate_entanglement(p, part, c.estimator());
            rows.push_back(estimate_row(method, e));
            estimate[method] = e.estimate;
            write_csv(ctx, "filtration_" + n + "_" + method + ".csv",
                      [&](std::ostream& os) { write_filtration_csv(os, e.curve, metadata(ctx)); });
            return e;
        };
        const EntanglementEstimate exact = add("exact", run.dist);
        add("sampled", counts_to_probdist(clean));
        add("raw", counts_to_probdist(noisy));
        add("m3", q.clipped());
        add("depletion", depletion_mitigate(noisy, model));
        Json report;
        report["n_atoms"] = run.system.n_atoms();
        report["partition"] = part.labels();
        report["s_vn"] = number(entanglement_entropy(run.gs.psi, part.class_mask(0)));
        report["n_shots"] = c.n_shots;
        report["m3"] = {{"support", q.entries.size()}, {"residual", q.residual}, {"clipped_mass", number(q.clipped_mass())}};
        report["rows"] = rows;
        write_json(ctx, "report_" + n + ".json", report);
        data[n] = report;
        estimate_checks(checks, ref, exact, n + " rungs exact");
        for (const char* m : {"m3", "depletion"}) {
            const double diff = std::abs(estimate[m] - estimate["raw"]);
            checks.push_back({n + " rungs |raw - " + m + "|", diff, "<= 0.05", diff <= kMitigationAgreement});
        }
    }
    return data;
}

Json fig11(const Context& ctx, std::vector<Check>& checks) {
    const RunConfig base = with_rungs(ctx.cfg, 6);
    const Partition part = Partition::four_region(6);
    double min_vn = 1e300;
    double max_gap = 0.0;
    Json data;
    data["partition"] = part.labels();
    auto sweep = [&](const std::string& name, const std::string& axis, auto&& set) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i <= 20; ++i) {
            RunConfig c = base;
            const double x = set(c, i);
            const ExactRun run = solve(c);
            const double vn = weak_monotonicity_vn(run.gs.psi, part);
            const double mi = weak_monotonicity_mi(run.dist, part);
            const double mc = weak_monotonicity_mi_complement(run.dist, part);
            min_vn = std::min(min_vn, vn);
            max_gap = std::max(max_gap, std::abs(mi - mc));
            rows.push_back({x, vn, mi});
        }
        write_series_csv(ctx, name, axis + ",vn,mi", rows);
    };
    sweep("weak_vs_delta.csv", "delta_over_omega", [](RunConfig& c, int i) { return c.delta_over_omega = 0.25 * i; });
    sweep("weak_vs_rb.csv", "rb_over_a", [](RunConfig& c, int i) { return c.rb_over_a = 1.0 + 0.125 * i; });
    checks.push_back({"min von Neumann weak monotonicity", min_vn, ">= -1e-9", min_vn >= -1e-9});
    checks.push_back({"max |mi - mi_complement|", max_gap, "<= 1e-12", max_gap <= 1e-12});
    return data;
}

Json fig12(const Context& ctx, std::vector<Check>& checks) {
    Json data = Json::object();
    for (int n : {6, 8, 10}) {
        const RunConfig c = with_rungs(ctx.cfg, n);
        const ExactRun run = solve(c);
        const Partition part = Partition::four_region(n);
        const double vn = weak_monotonicity_vn(run.gs.psi, part);
        std::vector<std::vector<double>> rows;
        double best = -1e300;
        for (double p_min : log_threshold_grid(run.dist, c.grid_lo, 30)) {
            const ProbDist f = filter(run.dist, p_min);
            const double mi = weak_monotonicity_mi(f, part);
            best = std::max(best, mi);
            rows.push_back({p_min, mi, static_cast<double>(f.size())});
        }
        write_series_csv(ctx, "weak_filter_" + std::to_string(n) + ".csv", "p_min,mi,survivors", rows);
        data[std::to_string(n)] = {{"partition", part.labels()}, {"vn", number(vn)},
                                   {"mi_unfiltered", number(weak_monotonicity_mi(run.dist, part))},
                                   {"mi_filtered_max", number(best)}};
        checks.push_back({std::to_string(n) + " rungs von Neumann weak monotonicity", vn, ">= -1e-9", vn >= -1e-9});
    }
    return data;
}

using Recipe = Json (*)(const Context&, std::vector<Check>&);

const std::vector<std::pair<std::string, Recipe>>& recipes() {
    static const std::vector<std::pair<std::string, Recipe>> r = {
        {"fig3", fig3},   {"fig4", fig4},         {"fig5", fig5},   {"fig6", fig6},   {"fig8", fig8},
        {"fig9", fig9},   {"tables2-4", tables}, {"fig11", fig11}, {"fig12", fig12},
    };
    return r;
}

}  // namespace

std::vector<std::string> reproduce_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, _] : recipes()) ids.push_back(id);
    return ids;
}

int cmd_reproduce(Context& ctx, const std::string& id) {
    const std::string key = id == "table1" ? "fig6" : id;
    const auto it = std::find_if(recipes().begin(), recipes().end(), [&](const auto& r) { return r.first == key; });
    if (it == recipes().end()) throw ParameterError("reproduce: unknown id '" + id + "'");
    begin(ctx);
    std::vector<Check> checks;
    const Json data = it->second(ctx, checks);
    const Json s = summary(id, checks, data);
    write_json(ctx, "summary.json", s);
    for (const auto& c : checks) std::cout << (c.pass ? "PASS " : "FAIL ") << id << ": " << c.name << " = " << fmt(c.value) << " (target " << c.target << ")\n";
    return 0;
}

}  // namespace rydladder::cli
