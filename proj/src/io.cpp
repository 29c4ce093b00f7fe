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

#include "rydladder/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace rydladder {

using Json = nlohmann::ordered_json;

namespace {

template <class Config, class F>
void visit_fields(Config& c, F&& f) {
    f("n_rungs", c.n_rungs);
    f("a_um", c.a_um);
    f("aspect_ratio", c.aspect_ratio);
    f("rb_over_a", c.rb_over_a);
    f("delta_over_omega", c.delta_over_omega);
    f("c6_mhz_um6", c.c6_mhz_um6);
    f("cutoff_radius_um", c.cutoff_radius_um);
    f("explicit_drive", c.explicit_drive);
    f("omega_mhz", c.omega_mhz);
    f("delta_mhz", c.delta_mhz);
    f("partition", c.partition);
    f("four_region_partition", c.four_region_partition);
    f("grid_lo", c.grid_lo);
    f("grid_points", c.grid_points);
    f("eps_small", c.eps_small);
    f("eps_gain", c.eps_gain);
    f("density_log10_lo", c.density_log10_lo);
    f("density_log10_hi", c.density_log10_hi);
    f("density_bins", c.density_bins);
    f("fit_p_lo", c.fit_p_lo);
    f("fit_p_hi", c.fit_p_hi);
    f("filter_p_min", c.filter_p_min);
    f("p01", c.p01);
    f("p10", c.p10);
    f("invert_post_sequence", c.invert_post_sequence);
    f("m3_tol", c.m3_tol);
    f("m3_max_iterations", c.m3_max_iterations);
    f("schedule", c.schedule);
    f("schedule_file", c.schedule_file);
    f("dt_us", c.dt_us);
    f("checkpoint_every", c.checkpoint_every);
    f("ramp_time_us", c.ramp_time_us);
    f("rampdown_dt_us", c.rampdown_dt_us);
    f("scan_delta_lo", c.scan.delta_lo);
    f("scan_delta_hi", c.scan.delta_hi);
    f("scan_n_delta", c.scan.n_delta);
    f("scan_rb_lo", c.scan.rb_lo);
    f("scan_rb_hi", c.scan.rb_hi);
    f("scan_n_rb", c.scan.n_rb);
    f("observables", c.observables);
    f("n_shots", c.n_shots);
    f("seed", c.seed);
    f("threads", c.threads);
    f("max_atoms", c.max_atoms);
    f("out_dir", c.out_dir);
}

void write_metadata(std::ostream& os, const Metadata& meta) {
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Data lines of a two-column CSV after the header comments and column row.
std::vector<std::pair<std::string, std::string>> read_two_columns(std::istream& is, std::string_view header) {
    std::vector<std::pair<std::string, std::string>> rows;
    std::string line;
    bool saw_header = false;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!saw_header) {
            if (t != header) throw DataFormatError("expected CSV header '" + std::string(header) + "', found '" + t + "'");
            saw_header = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw DataFormatError("malformed CSV row '" + t + "'");
        }
        rows.emplace_back(trim(std::string_view(t).substr(0, comma)), trim(std::string_view(t).substr(comma + 1)));
    }
    if (!saw_header) throw DataFormatError("missing CSV header '" + std::string(header) + "'");
    return rows;
}

double parse_double(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw DataFormatError("invalid number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw DataFormatError("invalid number '" + s + "'");
    }
}

std::uint64_t parse_count(const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataFormatError("invalid count '" + s + "'");
    return v;
}

std::vector<std::uint8_t> bit_array(const Json& j, const char* name) {
    if (!j.contains(name) || !j[name].is_array()) throw DataFormatError(std::string("shot record lacks array '") + name + "'");
    std::vector<std::uint8_t> out;
    for (const auto& v : j[name]) {
        if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
            throw DataFormatError(std::string("entries of '") + name + "' must be 0 or 1");
        }
        out.push_back(static_cast<std::uint8_t>(v.get<int>()));
    }
    return out;
}

std::vector<Breakpoint> breakpoints(const Json& j, const char* name) {
    if (!j.contains(name) || !j[name].is_array()) throw ParameterError(std::string("schedule lacks array '") + name + "'");
    std::vector<Breakpoint> out;
    for (const auto& pt : j[name]) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
            throw ParameterError("schedule breakpoints must be [t_us, MHz] pairs");
        }
        out.push_back({pt[0].get<double>(), kTwoPi * pt[1].get<double>()});
    }
    return out;
}

}  // namespace

LadderSystem RunConfig::system() const {
    LadderSystem sys = build_system(n_rungs, a_um, rb_over_a, delta_over_omega, kTwoPi * c6_mhz_um6);
    sys.aspect_ratio = aspect_ratio;
    sys.cutoff_radius = cutoff_radius_um;
    if (explicit_drive) {
        sys.omega = kTwoPi * omega_mhz;
        sys.delta = kTwoPi * delta_mhz;
    }
    sys.validate();
    return sys;
}

Partition RunConfig::bipartition() const {
    Partition p = partition.empty() ? Partition::half_cut(n_rungs) : Partition(partition);
    p.require_classes(2);
    return p;
}

EstimatorConfig RunConfig::estimator() const {
    EstimatorConfig e;
    e.eps_small = eps_small;
    e.eps_gain = eps_gain;
    e.grid_lo = grid_lo;
    e.grid_points = grid_points;
    return e;
}

ReadoutModel RunConfig::readout() const {
    ReadoutModel m{p01, p10};
    m.validate();
    return m;
}

LogBinning RunConfig::binning() const { return {density_log10_lo, density_log10_hi, density_bins}; }

GroundStateOptions RunConfig::ground_state_options() const {
    GroundStateOptions o;
    o.max_atoms = max_atoms;
    return o;
}

M3Options RunConfig::m3_options() const {
    M3Options o;
    o.tol = m3_tol;
    o.max_iterations = m3_max_iterations;
    return o;
}

void RunConfig::validate() const {
    if (n_rungs < 1) throw ParameterError("config: n_rungs must be positive");
    if (!(a_um > 0.0) || !(aspect_ratio > 0.0) || !(c6_mhz_um6 > 0.0)) throw ParameterError("config: a_um, aspect_ratio and c6_mhz_um6 must be positive");
    if (!(grid_lo > 0.0) || grid_points < 2) throw ParameterError("config: invalid threshold grid");
    if (!(eps_small >= 0.0) || !(eps_gain >= 0.0)) throw ParameterError("config: eps values must be nonnegative");
    if (density_bins < 2 || !(density_log10_lo < density_log10_hi)) throw ParameterError("config: invalid density binning");
    if (!(dt_us > 0.0) || !(rampdown_dt_us > 0.0)) throw ParameterError("config: time steps must be positive");
    if (!(ramp_time_us >= 0.0)) throw ParameterError("config: ramp_time_us must be nonnegative");
    if (explicit_drive && (!(omega_mhz >= 0.0) || !std::isfinite(delta_mhz))) {
        throw ParameterError("config: omega_mhz must be nonnegative and delta_mhz finite");
    }
    if (!(cutoff_radius_um >= 0.0)) throw ParameterError("config: cutoff_radius_um must be nonnegative");
    if (threads < 1) throw ParameterError("config: threads must be positive");
    if (!(filter_p_min >= 0.0 && filter_p_min < 1.0)) throw ParameterError("config: filter_p_min must lie in [0, 1)");
    readout();
    parse_schedule(schedule);
    for (const auto& o : observables) parse_observable(o);
}

std::string config_to_json(const RunConfig& cfg, int indent) {
    Json j = Json::object();
    RunConfig copy = cfg;
    visit_fields(copy, [&j](const char* name, const auto& value) { j[name] = value; });
    return indent < 0 ? j.dump() : j.dump(indent) + "\n";
}

RunConfig config_from_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParameterError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("config: top level must be an object");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        bool found = false;
        visit_fields(cfg, [&](const char* name, auto& field) {
            if (key != name) return;
            found = true;
            try {
                field = value.template get<std::decay_t<decltype(field)>>();
            } catch (const Json::exception&) {
                throw ParameterError("config: field '" + key + "' has the wrong type");
            }
        });
        if (!found) throw ParameterError("config: unknown field '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_json(read_text(path)); }

void save_config(const std::filesystem::path& path, const RunConfig& cfg) { write_text(path, config_to_json(cfg)); }

std::string to_bitstring(Bits bits, int n_atoms) {
    std::string s(static_cast<std::size_t>(n_atoms), '0');
    for (int k = 0; k < n_atoms; ++k) {
        if ((bits >> k) & 1u) s[static_cast<std::size_t>(k)] = '1';
    }
    return s;
}

Bits parse_bitstring(std::string_view text) {
    if (text.empty() || text.size() > 64) throw DataFormatError("bitstring must have 1 to 64 characters");
    Bits b = 0;
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (text[k] == '1') b |= Bits{1} << k;
        else if (text[k] != '0') throw DataFormatError("bitstring '" + std::string(text) + "' contains a non-binary character");
    }
    return b;
}

void write_probdist_csv(std::ostream& os, const ProbDist& p, const Metadata& meta) {
    write_metadata(os, meta);
    os << "bitstring,probability\n" << std::setprecision(17);
    for (const auto& e : p.entries()) os << to_bitstring(e.bits, p.n_atoms()) << ',' << e.p << '\n';
}

ProbDist read_probdist_csv(std::istream& is) {
    const auto rows = read_two_columns(is, "bitstring,probability");
    if (rows.empty()) throw DataFormatError("probability file has no rows");
    const auto n = static_cast<int>(rows.front().first.size());
    std::vector<ProbEntry> entries;
    double total = 0.0;
    for (const auto& [bits, prob] : rows) {
        if (static_cast<int>(bits.size()) != n) throw DataFormatError("bitstrings differ in length");
        const double p = parse_double(prob);
        if (!(p >= 0.0)) throw DataFormatError("negative probability for " + bits);
        entries.push_back({parse_bitstring(bits), p});
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) throw DataFormatError("probabilities sum to " + std::to_string(total));
    try {
        std::erase_if(entries, [](const ProbEntry& e) { return e.p == 0.0; });
        if (std::abs(total - 1.0) <= 1e-9) return ProbDist(n, std::move(entries), Origin::exact);
        return ProbDist::from_weights(n, std::move(entries), Origin::exact);
    } catch (const ParameterError& e) {
        throw DataFormatError(e.what());
    }
}

void write_counts_csv(std::ostream& os, const CountTable& counts, const Metadata& meta) {
    write_metadata(os, meta);
    os << "bitstring,count\n";
    for (const auto& [bits, c] : counts.counts) os << to_bitstring(bits, counts.n_atoms) << ',' << c << '\n';
}

CountTable read_counts_csv(std::istream& is) {
    const auto rows = read_two_columns(is, "bitstring,count");
    if (rows.empty()) throw DataFormatError("count file has no rows");
    CountTable out;
    out.n_atoms = static_cast<int>(rows.front().first.size());
    for (const auto& [bits, c] : rows) {
        if (static_cast<int>(bits.size()) != out.n_atoms) throw DataFormatError("bitstrings differ in length");
        out.add(parse_bitstring(bits), parse_count(c));
    }
    return out;
}

void write_quasi_csv(std::ostream& os, const QuasiDist& q, const Metadata& meta) {
    write_metadata(os, meta);
    os << "bitstring,weight\n" << std::setprecision(17);
    for (const auto& e : q.entries) os << to_bitstring(e.bits, q.n_atoms) << ',' << e.p << '\n';
}

std::vector<ShotRecord> read_shots_ndjson(std::istream& is) {
    std::vector<ShotRecord> shots;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const Json j = Json::parse(line);
            shots.push_back({bit_array(j, "pre_sequence"), bit_array(j, "post_sequence")});
        } catch (const Json::exception& e) {
            throw DataFormatError("shot file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return shots;
}

void write_shots_ndjson(std::ostream& os, const std::vector<ShotRecord>& shots) {
    for (const auto& s : shots) {
        Json j = Json::object();
        j["pre_sequence"] = s.pre_sequence;
        j["post_sequence"] = s.post_sequence;
        os << j.dump() << '\n';
    }
}

std::vector<ShotRecord> read_shots_task_result(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DataFormatError(std::string("task result: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("measurements") || !j["measurements"].is_array()) {
        throw DataFormatError("task result: expected an object with a 'measurements' array");
    }
    std::vector<ShotRecord> shots;
    for (const auto& m : j["measurements"]) {
        if (!m.contains("shotResult")) throw DataFormatError("task result: measurement lacks 'shotResult'");
        const auto& r = m["shotResult"];
        shots.push_back({bit_array(r, "preSequence"), bit_array(r, "postSequence")});
    }
    return shots;
}

std::vector<ShotRecord> read_shots(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    std::vector<ShotRecord> shots;
    if (text.find("\"measurements\"") != std::string::npos) {
        shots = read_shots_task_result(text);
    } else {
        std::istringstream is(text);
        shots = read_shots_ndjson(is);
    }
    if (shots.empty()) throw DataFormatError(path.string() + ": no shots");
    return shots;
}

void write_filtration_csv(std::ostream& os, const FiltrationCurve& curve, const Metadata& meta) {
    write_metadata(os, meta);
    os << "p_min,i_ab,s_cond,survivors,valid\n" << std::setprecision(17);
    for (const auto& pt : curve.points) {
        os << pt.p_min << ',';
        if (pt.valid) os << pt.i_ab << ',' << pt.s_cond;
        else os << "nan,nan";
        os << ',' << pt.survivors << ',' << (pt.valid ? 1 : 0) << '\n';
    }
}

RampSchedule schedule_from_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParameterError(std::string("schedule: invalid JSON: ") + e.what());
    }
    RampSchedule s;
    s.omega_points = breakpoints(j, "omega");
    s.delta_points = breakpoints(j, "delta");
    if (s.omega_points.empty()) throw ParameterError("schedule: empty omega profile");
    s.t_final = s.omega_points.back().t;
    s.validate();
    return s;
}

std::string schedule_to_json(const RampSchedule& sched) {
    Json j = Json::object();
    for (const auto& [name, pts] : {std::pair{"omega", &sched.omega_points}, std::pair{"delta", &sched.delta_points}}) {
        Json arr = Json::array();
        for (const auto& b : *pts) arr.push_back(Json::array({b.t, b.value / kTwoPi}));
        j[name] = arr;
    }
    return j.dump(2) + "\n";
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataFormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << text;
}

}  // namespace rydladder
