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
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rydladder/dist.hpp"
#include "rydladder/dynamics.hpp"
#include "rydladder/infoflow.hpp"
#include "rydladder/lattice.hpp"
#include "rydladder/noise.hpp"
#include "rydladder/spectrum.hpp"

namespace rydladder {

/// Everything a command needs to run, in one flat record.
struct RunConfig {
    // System.
    int n_rungs = 6;
    double a_um = kReferenceSpacing;
    double aspect_ratio = 2.0;
    double rb_over_a = kReferenceRbOverA;
    double delta_over_omega = kReferenceDeltaOverOmega;
    /// Cyclic units, MHz um^6; converted to rad/us um^6 in system().
    double c6_mhz_um6 = default_c6() / kTwoPi;
    double cutoff_radius_um = 0.0;
    /// When set, omega_mhz and delta_mhz (cyclic) replace the drive derived
    /// from rb_over_a and delta_over_omega.
    bool explicit_drive = false;
    double omega_mhz = 0.0;
    double delta_mhz = 0.0;

    // Analysis.
    std::string partition;  // empty: half cut
    std::string four_region_partition;
    double grid_lo = 1e-6;
    int grid_points = 60;
    double eps_small = 0.05;
    double eps_gain = 0.05;
    double density_log10_lo = -26.0;
    double density_log10_hi = -1.0;
    int density_bins = 50;
    double fit_p_lo = 1e-6;
    double fit_p_hi = 1e-2;
    double filter_p_min = 0.0;

    // Noise.
    double p01 = 0.01;
    double p10 = 0.08;
    bool invert_post_sequence = true;
    double m3_tol = 1e-8;
    int m3_max_iterations = 1000;

    // Dynamics.
    std::string schedule = "ramp4us";
    std::string schedule_file;
    double dt_us = 0.02;
    int checkpoint_every = 25;
    double ramp_time_us = 0.05;
    double rampdown_dt_us = 1e-3;

    // Scan.
    ScanGrid scan;
    std::vector<std::string> observables{"svn_half", "mi_half"};

    // Sampling and run control.
    std::uint64_t n_shots = 4405;
    std::uint64_t seed = 12345;
    int threads = 1;
    int max_atoms = 24;
    std::string out_dir = "out";

    LadderSystem system() const;
    Partition bipartition() const;
    EstimatorConfig estimator() const;
    ReadoutModel readout() const;
    LogBinning binning() const;
    GroundStateOptions ground_state_options() const;
    M3Options m3_options() const;
    void validate() const;
};

/// JSON text with every field; parsing rejects unknown keys. A negative
/// indent gives a single line.
std::string config_to_json(const RunConfig& cfg, int indent = 2);
RunConfig config_from_json(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

/// Character k is atom k ('1' = Rydberg).
std::string to_bitstring(Bits bits, int n_atoms);
Bits parse_bitstring(std::string_view text);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// "# key: value" header lines, then "bitstring,probability" at 17 digits.
void write_probdist_csv(std::ostream& os, const ProbDist& p, const Metadata& meta = {});
ProbDist read_probdist_csv(std::istream& is);

void write_counts_csv(std::ostream& os, const CountTable& counts, const Metadata& meta = {});
CountTable read_counts_csv(std::istream& is);

void write_quasi_csv(std::ostream& os, const QuasiDist& q, const Metadata& meta = {});

/// One JSON object per line with "pre_sequence" and "post_sequence" arrays.
std::vector<ShotRecord> read_shots_ndjson(std::istream& is);
void write_shots_ndjson(std::ostream& os, const std::vector<ShotRecord>& shots);
/// Task-result layout: measurements[].shotResult.{preSequence, postSequence}.
std::vector<ShotRecord> read_shots_task_result(std::string_view text);
/// Picks the layout from the content; a file without shots is rejected.
std::vector<ShotRecord> read_shots(const std::filesystem::path& path);

void write_filtration_csv(std::ostream& os, const FiltrationCurve& curve, const Metadata& meta = {});

/// {"omega": [[t_us, MHz], ...], "delta": [[t_us, MHz], ...]}, frequencies
/// cyclic; converted to rad/us.
RampSchedule schedule_from_json(std::string_view text);
std::string schedule_to_json(const RampSchedule& sched);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace rydladder
