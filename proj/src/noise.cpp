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

#include "rydladder/noise.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rydladder/fitting.hpp"

namespace rydladder {

void ReadoutModel::validate() const {
    for (double p : {p01, p10}) {
        if (!(p >= 0.0 && p < 0.5)) throw ParameterError("readout error rates must lie in [0, 0.5)");
    }
}

void ReadoutModel::validate_channel() const {
    for (double p : {p01, p10}) {
        if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("readout error rates must lie in [0, 1]");
    }
}

double ReadoutModel::confusion(int read, int truth) const {
    if (truth == 0) return read == 0 ? 1.0 - p01 : p01;
    return read == 1 ? 1.0 - p10 : p10;
}

double QuasiDist::sum() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.p;
    return s;
}

double QuasiDist::clipped_mass() const {
    double s = 0.0;
    for (const auto& e : entries) {
        if (e.p < 0.0) s -= e.p;
    }
    return s;
}

ProbDist QuasiDist::clipped() const {
    std::vector<ProbEntry> kept;
    for (const auto& e : entries) {
        if (e.p > 0.0) kept.push_back(e);
    }
    return ProbDist::from_weights(n_atoms, std::move(kept), Origin::mitigated, n_shots);
}

CountTable apply_readout_noise(const CountTable& counts, const ReadoutModel& model, std::uint64_t seed) {
    model.validate_channel();
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    CountTable out;
    out.n_atoms = counts.n_atoms;
    for (const auto& [bits, c] : counts.counts) {
        for (std::uint64_t s = 0; s < c; ++s) {
            Bits read = bits;
            for (int k = 0; k < counts.n_atoms; ++k) {
                const Bits m = Bits{1} << k;
                const double flip = (bits & m) ? model.p10 : model.p01;
                if (uniform() < flip) read ^= m;
            }
            ++out.counts[read];
        }
    }
    return out;
}

ProbDist apply_readout_channel(const ProbDist& p, const ReadoutModel& model) {
    model.validate_channel();
    if (p.n_atoms() > 24) throw ParameterError("readout channel: at most 24 atoms");
    std::vector<double> q = p.dense();
    for (int k = 0; k < p.n_atoms(); ++k) {
        const std::size_t bit = std::size_t{1} << k;
        for (std::size_t hi = 0; hi < q.size(); hi += 2 * bit) {
            for (std::size_t b = hi; b < hi + bit; ++b) {
                const double q0 = q[b];
                const double q1 = q[b | bit];
                q[b] = (1.0 - model.p01) * q0 + model.p10 * q1;
                q[b | bit] = model.p01 * q0 + (1.0 - model.p10) * q1;
            }
        }
    }
    std::vector<ProbEntry> entries;
    for (std::size_t b = 0; b < q.size(); ++b) {
        if (q[b] > 0.0) entries.push_back({b, q[b]});
    }
    return ProbDist::from_weights(p.n_atoms(), std::move(entries), p.origin(), p.n_shots());
}

namespace {

/// Assignment-matrix elements indexed by the bit-pattern counts
/// (true 0 read 1, true 1 read 0, true 1 read 1).
class ConfusionTable {
  public:
    ConfusionTable(int n_atoms, const ReadoutModel& m) : n_(n_atoms), stride_(n_atoms + 1) {
        values_.resize(static_cast<std::size_t>(stride_) * stride_ * stride_, 0.0);
        for (int n01 = 0; n01 <= n_; ++n01) {
            for (int n10 = 0; n01 + n10 <= n_; ++n10) {
                for (int n11 = 0; n01 + n10 + n11 <= n_; ++n11) {
                    const int n00 = n_ - n01 - n10 - n11;
                    values_[index(n01, n10, n11)] = std::pow(1.0 - m.p01, n00) * std::pow(m.p01, n01) *
                                                    std::pow(m.p10, n10) * std::pow(1.0 - m.p10, n11);
                }
            }
        }
    }

    double operator()(Bits read, Bits truth) const {
        return values_[index(popcount(read & ~truth), popcount(truth & ~read), popcount(read & truth))];
    }

  private:
    std::size_t index(int a, int b, int c) const {
        return (static_cast<std::size_t>(a) * stride_ + static_cast<std::size_t>(b)) * stride_ + static_cast<std::size_t>(c);
    }

    int n_;
    int stride_;
    std::vector<double> values_;
};

}  // namespace

QuasiDist m3_mitigate(const ProbDist& noisy, const ReadoutModel& model, const M3Options& options) {
    model.validate();
    if (!(options.tol > 0.0) || options.max_iterations < 1 || options.restart < 1) {
        throw ParameterError("m3: invalid solver options");
    }
    const auto entries = noisy.entries();
    const auto n = static_cast<Eigen::Index>(entries.size());
    const ConfusionTable table(noisy.n_atoms(), model);

    Eigen::VectorXd b(n);
    Eigen::VectorXd col_scale(n);
    Eigen::VectorXd diag(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        b(j) = entries[static_cast<std::size_t>(j)].p;
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += table(entries[static_cast<std::size_t>(i)].bits, entries[static_cast<std::size_t>(j)].bits);
        col_scale(j) = 1.0 / s;
        diag(j) = table(entries[static_cast<std::size_t>(j)].bits, entries[static_cast<std::size_t>(j)].bits) * col_scale(j);
    }
    // y = A_norm M^-1 u with M = diag(A_norm).
    auto apply = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd x = (u.array() / diag.array() * col_scale.array()).matrix();
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Bits read = entries[static_cast<std::size_t>(i)].bits;
            double acc = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) acc += table(read, entries[static_cast<std::size_t>(j)].bits) * x(j);
            y(i) = acc;
        }
        return y;
    };

    const double b_norm = b.norm();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    double rel = 1.0;
    int iterations = 0;
    const int m = static_cast<int>(std::min<Eigen::Index>(options.restart, n));
    while (iterations < options.max_iterations) {
        const Eigen::VectorXd r = b - apply(u);
        const double beta = r.norm();
        rel = beta / b_norm;
        if (rel <= options.tol) break;
        Eigen::MatrixXd v(n, m + 1);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
        Eigen::VectorXd cs(m), sn(m), g = Eigen::VectorXd::Zero(m + 1);
        v.col(0) = r / beta;
        g(0) = beta;
        int k = 0;
        for (; k < m && iterations < options.max_iterations; ++k) {
            ++iterations;
            Eigen::VectorXd w = apply(v.col(k));
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= k; ++i) {
                    const double hij = v.col(i).dot(w);
                    h(i, k) += hij;
                    w -= hij * v.col(i);
                }
            }
            h(k + 1, k) = w.norm();
            if (h(k + 1, k) > 0.0) v.col(k + 1) = w / h(k + 1, k);
            for (int i = 0; i < k; ++i) {
                const double t = cs(i) * h(i, k) + sn(i) * h(i + 1, k);
                h(i + 1, k) = -sn(i) * h(i, k) + cs(i) * h(i + 1, k);
                h(i, k) = t;
            }
            const double denom = std::hypot(h(k, k), h(k + 1, k));
            cs(k) = h(k, k) / denom;
            sn(k) = h(k + 1, k) / denom;
            h(k, k) = denom;
            h(k + 1, k) = 0.0;
            g(k + 1) = -sn(k) * g(k);
            g(k) = cs(k) * g(k);
            if (std::abs(g(k + 1)) / b_norm <= options.tol || denom == 0.0) {
                ++k;
                break;
            }
        }
        const Eigen::VectorXd y =
            h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        u += v.leftCols(k) * y;
    }
    rel = (b - apply(u)).norm() / b_norm;
    if (!(rel <= options.tol)) {
        std::ostringstream os;
        os << "m3: solver did not converge after " << iterations << " iterations, relative residual " << rel;
        throw SolverError(os.str(), rel);
    }

    QuasiDist out;
    out.n_atoms = noisy.n_atoms();
    out.n_shots = noisy.n_shots();
    out.residual = rel;
    out.iterations = iterations;
    out.entries.reserve(entries.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        out.entries.push_back({entries[static_cast<std::size_t>(j)].bits, u(j) / diag(j)});
    }
    return out;
}

QuasiDist m3_mitigate(const CountTable& counts, const ReadoutModel& model, const M3Options& options) {
    return m3_mitigate(counts_to_probdist(counts), model, options);
}

double depletion_factor(Bits bits, int n_atoms, const ReadoutModel& model) {
    model.validate();
    if (n_atoms < 1 || n_atoms > 64 || (bits & ~low_mask(n_atoms)) != 0) {
        throw ParameterError("depletion factor: bitstring does not fit n_atoms");
    }
    const int n_r = popcount(bits);
    return std::pow(1.0 - model.p10, n_r) * std::pow(1.0 - model.p01, n_atoms - n_r);
}

ProbDist depletion_mitigate(const CountTable& counts, const ReadoutModel& model) {
    if (counts.n_shots() == 0) throw ParameterError("depletion mitigation: empty count table");
    std::vector<ProbEntry> weights;
    for (const auto& [bits, c] : counts.counts) {
        if (c > 0) weights.push_back({bits, static_cast<double>(c) / depletion_factor(bits, counts.n_atoms, model)});
    }
    return ProbDist::from_weights(counts.n_atoms, std::move(weights), Origin::mitigated, counts.n_shots());
}

PostSelection postselect(std::span<const ShotRecord> shots, bool invert_post_sequence) {
    if (shots.empty()) throw ParameterError("postselect: no shots");
    const std::size_t n = shots.front().pre_sequence.size();
    if (n == 0 || n > 64) throw DataFormatError("postselect: shots must have between 1 and 64 atoms");
    PostSelection out;
    out.counts.n_atoms = static_cast<int>(n);
    out.total = shots.size();
    for (const auto& shot : shots) {
        if (shot.pre_sequence.size() != n || shot.post_sequence.size() != n) {
            throw DataFormatError("postselect: inconsistent sequence lengths");
        }
        if (!std::all_of(shot.pre_sequence.begin(), shot.pre_sequence.end(), [](std::uint8_t v) { return v == 1; })) {
            continue;
        }
        Bits bits = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint8_t v = shot.post_sequence[k];
            if (v > 1) throw DataFormatError("postselect: post-sequence entries must be 0 or 1");
            if ((v == 1) != invert_post_sequence) bits |= Bits{1} << k;
        }
        out.counts.add(bits);
        ++out.kept;
    }
    out.sorting_fidelity = static_cast<double>(out.kept) / static_cast<double>(out.total);
    return out;
}

double SortingFidelityFit::keep_fraction(int n_atoms) const { return std::exp(intercept) * std::pow(f, n_atoms); }

SortingFidelityFit sorting_fidelity_fit(std::span<const std::pair<int, double>> series, bool through_origin) {
    if (series.size() < 2) throw ParameterError("sorting fidelity fit: need at least 2 points");
    std::vector<double> x, y;
    for (const auto& [atoms, fid] : series) {
        if (!(fid > 0.0 && fid <= 1.0)) throw ParameterError("sorting fidelity fit: fidelities must lie in (0, 1]");
        x.push_back(atoms);
        y.push_back(std::log(fid));
    }
    const LinearFit lf = through_origin ? ols_through_origin(x, y) : ols(x, y);
    SortingFidelityFit fit;
    fit.f = std::exp(lf.slope);
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    fit.n_points = static_cast<int>(x.size());
    return fit;
}

}  // namespace rydladder
