// Copyright 2026 The qrtx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qrtx/dataset.hpp"

namespace qrtx {

struct PearsonResult {
    double r = 0.0;
    double p = 1.0;
};

struct DegenerateVariable : Error {
    using Error::Error;
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Two-sided p-value of the t statistic with N - 2 degrees of freedom:
// P(|T| > t) = I_{nu/(nu+t^2)}(nu/2, 1/2).
inline double pearson_p_value(double r, std::size_t count) {
    const double nu = static_cast<double>(count) - 2.0;
    double r2 = std::min(1.0, r * r);
    if (r2 >= 1.0) return 0.0;
    double t2 = r2 * nu / (1.0 - r2);
    return boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + t2));
}

inline PearsonResult pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    if (xs.size() < 3) throw std::invalid_argument("pearson: need at least 3 samples");
    double mx = mean_of(xs), my = mean_of(ys);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    // Relative to the data scale, so values that are constant up to rounding count as constant.
    auto tiny = [&](double ss, double m) { return ss <= 1e-24 * std::max(1.0, m * m) * static_cast<double>(xs.size()); };
    if (tiny(sxx, mx) || tiny(syy, my))
        throw DegenerateVariable("pearson: degenerate variable (zero variance)");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    return {r, pearson_p_value(r, xs.size())};
}

// '*' at p < 0.10, '**' at p < 0.05
inline std::string significance_stars(double p) { return p < 0.05 ? "**" : (p < 0.10 ? "*" : ""); }

inline std::vector<double> column(const std::vector<WitnessRecord>& recs, WitnessId w) {
    std::vector<double> out;
    out.reserve(recs.size());
    for (const auto& r : recs) out.push_back(r.values[w]);
    return out;
}

struct CorrelationReport {
    std::size_t count = 0;
    std::array<std::array<double, 8>, 8> r{};
    std::array<std::array<double, 8>, 8> p{};
    std::array<std::array<bool, 8>, 8> defined{};  // false where a column is constant
};

inline bool is_constant(const std::vector<double>& v) {
    if (v.empty()) return true;
    double m = mean_of(v), ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss <= 1e-24 * std::max(1.0, m * m) * static_cast<double>(v.size());
}

inline CorrelationReport correlations(const std::vector<WitnessRecord>& recs) {
    CorrelationReport rep;
    rep.count = recs.size();
    std::array<std::vector<double>, 8> cols;
    std::array<bool, 8> constant{};
    for (std::size_t k = 0; k < 8; ++k) {
        cols[k] = column(recs, kAllWitnesses[k]);
        constant[k] = is_constant(cols[k]);
    }
    for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = a; b < 8; ++b) {
            PearsonResult pr{NAN, NAN};
            bool ok = !constant[a] && !constant[b];
            if (ok) pr = a == b ? PearsonResult{1.0, 0.0} : pearson(cols[a], cols[b]);
            rep.r[a][b] = rep.r[b][a] = pr.r;
            rep.p[a][b] = rep.p[b][a] = pr.p;
            rep.defined[a][b] = rep.defined[b][a] = ok;
        }
    return rep;
}

// Families whose states are free for the witness, and so sit out its comparison.
inline std::set<FamilyId> pairwise_exclusions(WitnessId w) {
    switch (w) {
        case WitnessId::ent: return {FamilyId::ent, FamilyId::uent};
        case WitnessId::sn: return {FamilyId::sn, FamilyId::uent};
        case WitnessId::uent: return {FamilyId::uent};
        case WitnessId::ferm: return {FamilyId::ferm};
        case WitnessId::imag: return {FamilyId::imag};
        case WitnessId::real: return {FamilyId::real};
        case WitnessId::coh: return {FamilyId::coh};
        case WitnessId::stab: return {FamilyId::stab};
    }
    return {};
}

struct PairwiseCell {
    double win_pct = 0.0;
    double score = 0.0;
    std::uint64_t comparisons = 0;
};

struct PairwiseTable {
    double eps = 1e-9;
    std::vector<FamilyId> families;                          // present in the dataset, in family order
    std::map<std::pair<FamilyId, WitnessId>, PairwiseCell> cells;  // absent => excluded
    std::map<WitnessId, std::set<FamilyId>> exclusions;

    std::optional<double> win_pct(FamilyId f, WitnessId w) const {
        auto it = cells.find({f, w});
        if (it == cells.end()) return std::nullopt;
        return it->second.win_pct;
    }
};

// Every state of family A is compared with every state of every other
// participating family B: 1 point for strictly greater, 1/2 each within eps.
inline PairwiseTable pairwise_table(const std::vector<WitnessRecord>& recs, double eps = 1e-9) {
    PairwiseTable t;
    t.eps = eps;
    std::map<FamilyId, std::vector<const WitnessRecord*>> by_family;
    for (const auto& r : recs) by_family[r.family].push_back(&r);
    for (auto& [f, v] : by_family) t.families.push_back(f);
    for (auto w : kAllWitnesses) {
        auto excl = pairwise_exclusions(w);
        t.exclusions[w] = excl;
        std::vector<FamilyId> part;
        for (auto f : t.families)
            if (!excl.count(f)) part.push_back(f);
        if (part.size() < 2) throw std::invalid_argument(std::string("pairwise_table: fewer than two families for ") + to_string(w));
        for (auto a : part) {
            PairwiseCell cell;
            for (auto b : part) {
                if (a == b) continue;
                for (const auto* ra : by_family[a])
                    for (const auto* rb : by_family[b]) {
                        double va = ra->values[w], vb = rb->values[w];
                        if (std::abs(va - vb) <= eps) cell.score += 0.5;
                        else if (va > vb) cell.score += 1.0;
                        ++cell.comparisons;
                    }
            }
            if (cell.comparisons == 0) throw std::invalid_argument("pairwise_table: empty family");
            cell.win_pct = 100.0 * cell.score / static_cast<double>(cell.comparisons);
            t.cells[{a, w}] = cell;
        }
    }
    return t;
}

struct PcaResult {
    std::vector<WitnessId> variables;
    std::vector<double> eigenvalues;               // descending
    std::vector<double> explained_variance_ratio;  // descending, sums to 1
    RMatrix loadings;                              // column k = component k
    RMatrix projections;                           // N x 2
    bool standardized = true;
    std::vector<WitnessId> constant_variables;     // reported, not fatal
    double covariance_trace = 0.0;
};

inline PcaResult pca(const std::vector<WitnessRecord>& recs, const std::set<WitnessId>& exclude = {WitnessId::imag},
                     bool standardize = true) {
    PcaResult res;
    res.standardized = standardize;
    for (auto w : kAllWitnesses)
        if (!exclude.count(w)) res.variables.push_back(w);
    const auto m = static_cast<Eigen::Index>(res.variables.size());
    const auto N = static_cast<Eigen::Index>(recs.size());
    if (N <= m) throw std::invalid_argument("pca: need more samples than variables");
    RMatrix x(N, m);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index k = 0; k < m; ++k) x(i, k) = recs[static_cast<std::size_t>(i)].values[res.variables[static_cast<std::size_t>(k)]];
    RVector mu = x.colwise().mean();
    x.rowwise() -= mu.transpose();
    for (Eigen::Index k = 0; k < m; ++k) {
        double sd = std::sqrt(x.col(k).squaredNorm() / static_cast<double>(N - 1));
        if (sd <= 1e-12) {
            res.constant_variables.push_back(res.variables[static_cast<std::size_t>(k)]);
            x.col(k).setZero();
        } else if (standardize) {
            x.col(k) /= sd;
        }
    }
    RMatrix cov = (x.transpose() * x) / static_cast<double>(N - 1);
    res.covariance_trace = cov.trace();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(cov);
    RVector ev = es.eigenvalues();
    RMatrix vec = es.eigenvectors();
    res.loadings.resize(m, m);
    double total = 0;
    for (Eigen::Index k = 0; k < m; ++k) total += std::max(0.0, ev[k]);
    for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::Index src = m - 1 - k;
        RVector v = vec.col(src);
        Eigen::Index big;
        v.cwiseAbs().maxCoeff(&big);
        if (v[big] < 0) v = -v;
        res.loadings.col(k) = v;
        double lam = std::max(0.0, ev[src]);
        res.eigenvalues.push_back(lam);
        res.explained_variance_ratio.push_back(total > 0 ? lam / total : 0.0);
    }
    res.projections = x * res.loadings.leftCols(std::min<Eigen::Index>(2, m));
    return res;
}

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0, sd = 0, q1 = 0, median = 0, q3 = 0;
};

// Quartiles by linear interpolation between order statistics.
inline SummaryStats summarize(std::vector<double> v) {
    SummaryStats s;
    s.count = v.size();
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    s.mean = mean_of(v);
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    auto quant = [&](double p) {
        double pos = p * static_cast<double>(v.size() - 1);
        auto lo = static_cast<std::size_t>(std::floor(pos));
        std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    s.q1 = quant(0.25);
    s.median = quant(0.5);
    s.q3 = quant(0.75);
    return s;
}

inline double witness_mean(const WitnessVector& v) {
    double s = 0;
    for (double x : v.values) s += x;
    return s / 8.0;
}

struct AverageRow {
    FamilyId family;
    int n;
    SummaryStats stats;
};

// Per (family, n): distribution of the per-state mean over the eight witnesses.
inline std::vector<AverageRow> averages(const std::vector<WitnessRecord>& recs) {
    std::map<std::pair<FamilyId, int>, std::vector<double>> groups;
    for (const auto& r : recs) groups[{r.family, r.n}].push_back(witness_mean(r.values));
    std::vector<AverageRow> out;
    for (auto& [key, vals] : groups) out.push_back({key.first, key.second, summarize(vals)});
    return out;
}

}  // namespace qrtx
