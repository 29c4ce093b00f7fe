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

#include "rydladder/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "rydladder/infoflow.hpp"
#include "rydladder/lanczos.hpp"

namespace rydladder {

DegenerateGroundStateError::DegenerateGroundStateError(double e0, double e1)
    : NumericalError([&] {
          std::ostringstream os;
          os << std::setprecision(17) << "degenerate ground state: E0 = " << e0 << ", E1 = " << e1;
          return os.str();
      }()),
      e0_(e0),
      e1_(e1) {}

namespace {

GroundState classical_ground_state(const Hamiltonian& h, const GroundStateOptions& options) {
    const std::size_t dim = h.dim();
    std::size_t best = 0;
    for (std::size_t b = 1; b < dim; ++b) {
        if (h.diagonal(b) < h.diagonal(best)) best = b;
    }
    const double e0 = h.diagonal(best);
    double e1 = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < dim; ++b) {
        if (b != best) e1 = std::min(e1, h.diagonal(b));
    }
    if (e1 - e0 < options.degeneracy_gap) throw DegenerateGroundStateError(e0, e1);
    GroundState gs;
    gs.energy = e0;
    gs.first_excited = e1;
    gs.psi = PureState::basis(h.n_atoms(), best);
    return gs;
}

}  // namespace

GroundState ground_state(const Hamiltonian& h, const GroundStateOptions& options) {
    if (h.n_atoms() > options.max_atoms) {
        throw ParameterError("ground_state: " + std::to_string(h.n_atoms()) + " atoms exceeds the configured maximum of " +
                             std::to_string(options.max_atoms));
    }
    if (h.omega() == 0.0) return classical_ground_state(h, options);

    LanczosOptions lo;
    lo.nev = 2;
    lo.krylov_dim = options.krylov_dim;
    lo.max_matvecs = options.max_matvecs;
    lo.tol = options.tol;
    lo.seed = options.seed;
    const RealOperator op = [&h](std::span<const double> in, std::span<double> out) { h.apply(in, out); };
    std::vector<double> diag(h.dim());
    for (std::size_t b = 0; b < diag.size(); ++b) diag[b] = h.diagonal(b);
    EigenPairs pairs = lowest_eigenpairs_davidson(diag, op, lo);
    if (!pairs.converged) {
        std::ostringstream os;
        os << "ground_state: no convergence after " << pairs.matvecs << " matrix-vector products, residual "
           << pairs.residuals.front();
        throw ConvergenceError(os.str(), pairs.residuals.front());
    }
    const double e0 = pairs.values.at(0);
    const double e1 = pairs.values.size() > 1 ? pairs.values[1] : std::numeric_limits<double>::infinity();
    if (e1 - e0 < options.degeneracy_gap) throw DegenerateGroundStateError(e0, e1);

    std::vector<double>& v = pairs.vectors.front();
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[argmax])) argmax = i;
    }
    const double sign = v[argmax] < 0.0 ? -1.0 : 1.0;

    GroundState gs;
    gs.energy = e0;
    gs.first_excited = e1;
    gs.residual = pairs.residuals.front();
    gs.matvecs = pairs.matvecs;
    gs.psi = PureState(h.n_atoms());
    for (std::size_t i = 0; i < v.size(); ++i) gs.psi.amplitudes[i] = sign * v[i];
    return gs;
}

GroundState ground_state(const LadderSystem& sys, const GroundStateOptions& options) {
    sys.validate();
    if (sys.n_atoms() > options.max_atoms) {
        throw ParameterError("ground_state: " + std::to_string(sys.n_atoms()) + " atoms exceeds the configured maximum of " +
                             std::to_string(options.max_atoms));
    }
    return ground_state(Hamiltonian(sys), options);
}

ReducedDensityMatrix reduced_density_matrix(const PureState& psi, Bits region_mask) {
    const Bits all = low_mask(psi.n_atoms);
    if ((region_mask & all) == 0 || (region_mask & all) == all || (region_mask & ~all) != 0) {
        throw ParameterError("reduced_density_matrix: region must be a nonempty proper subset of the atoms");
    }
    const BitGather keep(region_mask);
    const BitGather trace(all & ~region_mask);
    const Eigen::Index rows = Eigen::Index{1} << keep.width();
    const Eigen::Index cols = Eigen::Index{1} << trace.width();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    for (std::size_t b = 0; b < psi.dim(); ++b) {
        m(static_cast<Eigen::Index>(keep(b)), static_cast<Eigen::Index>(trace(b))) = psi.amplitudes[b];
    }
    ReducedDensityMatrix out;
    for (int k = 0; k < psi.n_atoms; ++k) {
        if ((region_mask >> k) & 1u) out.atoms.push_back(k);
    }
    out.rho.noalias() = m * m.adjoint();
    return out;
}

ReducedDensityMatrix reduced_density_matrix(const PureState& psi, const Partition& part, std::string_view labels) {
    if (part.n_atoms() != psi.n_atoms) throw ParameterError("partition length does not match the state");
    return reduced_density_matrix(psi, part.mask(labels));
}

double von_neumann_entropy(const ReducedDensityMatrix& rho) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double lambda = eig.eigenvalues()(i);
        if (lambda > 1e-14) s -= lambda * std::log(lambda);
    }
    return s;
}

double entanglement_entropy(const PureState& psi, Bits region_mask) {
    const Bits all = low_mask(psi.n_atoms);
    const Bits complement = all & ~region_mask;
    const Bits smaller = popcount(region_mask) <= popcount(complement) ? region_mask : complement;
    return von_neumann_entropy(reduced_density_matrix(psi, smaller));
}

std::string_view observable_name(Observable obs) {
    switch (obs) {
        case Observable::svn_half: return "svn_half";
        case Observable::mi_half: return "mi_half";
        case Observable::ratio_half: return "ratio_half";
        case Observable::weak_vn: return "weak_vn";
        case Observable::weak_mi: return "weak_mi";
        case Observable::weak_ratio: return "weak_ratio";
    }
    return "unknown";
}

Observable parse_observable(std::string_view name) {
    for (Observable o : {Observable::svn_half, Observable::mi_half, Observable::ratio_half, Observable::weak_vn,
                         Observable::weak_mi, Observable::weak_ratio}) {
        if (observable_name(o) == name) return o;
    }
    throw ParameterError("unknown observable '" + std::string(name) + "'");
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw ParameterError("grid needs at least one point per axis");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return out;
}

bool needs_four_regions(Observable o) {
    return o == Observable::weak_vn || o == Observable::weak_mi || o == Observable::weak_ratio;
}

}  // namespace

std::vector<double> ScanGrid::delta_axis() const { return linspace(delta_lo, delta_hi, n_delta); }
std::vector<double> ScanGrid::rb_axis() const { return linspace(rb_lo, rb_hi, n_rb); }

Heatmap scan_heatmap(const ScanGrid& grid, const ScanTemplate& tmpl, const std::vector<Observable>& observables,
                     const GroundStateOptions& options, int threads) {
    Heatmap map;
    map.delta_axis = grid.delta_axis();
    map.rb_axis = grid.rb_axis();
    const std::size_t nd = map.delta_axis.size();
    const std::size_t nr = map.rb_axis.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (Observable o : observables) {
        if (needs_four_regions(o) && tmpl.four_region_labels.empty()) {
            throw ParameterError("observable " + std::string(observable_name(o)) + " needs a four-region partition");
        }
        map.values[o].assign(nd, std::vector<double>(nr, nan));
    }
    const Partition half = Partition::half_cut(tmpl.n_rungs);
    std::optional<Partition> four;
    if (!tmpl.four_region_labels.empty()) {
        four.emplace(tmpl.four_region_labels);
        four->require_classes(4);
        if (four->n_atoms() != 2 * tmpl.n_rungs) throw ParameterError("four-region labels must have one entry per atom");
    }

    std::vector<std::string> failures(nd * nr);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < nd * nr; idx = next++) {
            const std::size_t i = idx / nr;
            const std::size_t j = idx % nr;
            try {
                LadderSystem sys = build_system(tmpl.n_rungs, tmpl.a, map.rb_axis[j], map.delta_axis[i], tmpl.c6);
                sys.aspect_ratio = tmpl.aspect_ratio;
                const GroundState gs = ground_state(sys, options);
                const ProbDist dist = ProbDist::from_state(gs.psi);
                double svn = nan, mi = nan, wvn = nan, wmi = nan;
                for (Observable o : observables) {
                    double value = nan;
                    switch (o) {
                        case Observable::svn_half:
                        case Observable::mi_half:
                        case Observable::ratio_half:
                            if (std::isnan(svn)) svn = entanglement_entropy(gs.psi, half.class_mask(0));
                            if (std::isnan(mi)) mi = mutual_information(dist, half);
                            value = o == Observable::svn_half ? svn : o == Observable::mi_half ? mi : (svn > 0 ? mi / svn : nan);
                            break;
                        case Observable::weak_vn:
                        case Observable::weak_mi:
                        case Observable::weak_ratio:
                            if (std::isnan(wvn)) wvn = weak_monotonicity_vn(gs.psi, *four);
                            if (std::isnan(wmi)) wmi = weak_monotonicity_mi(dist, *four);
                            value = o == Observable::weak_vn ? wvn : o == Observable::weak_mi ? wmi : (wvn > 0 ? wmi / wvn : nan);
                            break;
                    }
                    map.values[o][i][j] = value;
                }
            } catch (const NumericalError& e) {
                std::ostringstream os;
                os << "delta_over_omega=" << map.delta_axis[i] << " rb_over_a=" << map.rb_axis[j] << ": " << e.what();
                failures[idx] = os.str();
            }
        }
    };
    const int n_threads = std::max(1, threads);
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }
    for (auto& f : failures) {
        if (!f.empty()) map.flagged.push_back(std::move(f));
    }
    return map;
}

void write_heatmap_csv(std::ostream& os, const Heatmap& map, Observable obs) {
    const auto it = map.values.find(obs);
    if (it == map.values.end()) throw ParameterError("observable not present in heatmap");
    os << std::setprecision(6);
    os << "delta_over_omega\\rb_over_a";
    for (double rb : map.rb_axis) os << ',' << rb;
    os << '\n';
    for (std::size_t i = 0; i < map.delta_axis.size(); ++i) {
        os << map.delta_axis[i];
        for (double v : it->second[i]) {
            os << ',';
            if (std::isnan(v)) os << "nan";
            else os << v;
        }
        os << '\n';
    }
}

}  // namespace rydladder
