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

#include <gtest/gtest.h>

#include <numbers>

#include "qrtx/qrtx.hpp"

using namespace qrtx;

namespace {

// Two-sided tail of Student's t by Simpson integration of the density.
double t_tail_numeric(double t, double nu) {
    auto pdf = [&](double x) {
        return std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(nu * std::numbers::pi) *
               std::pow(1 + x * x / nu, -(nu + 1) / 2);
    };
    const int m = 20000;
    const double h = t / m;
    double s = pdf(0) + pdf(t);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4 : 2) * pdf(i * h);
    double central = s * h / 3;
    return 1.0 - 2.0 * central;
}

WitnessRecord rec(FamilyId f, int id, std::array<double, 8> vals) {
    WitnessRecord r;
    r.family = f;
    r.n = 3;
    r.state_id = id;
    r.values.n = 3;
    r.values.values = vals;
    return r;
}

}  // namespace

TEST(Pearson, Examples) {
    std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 1, 4, 3, 5};
    EXPECT_NEAR(pearson(x, y).r, 0.8, 1e-14);
    std::vector<double> lin;
    for (double v : x) lin.push_back(2 * v + 1);
    EXPECT_NEAR(pearson(x, lin).r, 1.0, 1e-14);
    EXPECT_EQ(pearson(x, lin).p, 0.0);
}

TEST(Pearson, Errors) {
    std::vector<double> x = {1, 2, 3}, c = {4, 4, 4};
    EXPECT_THROW(pearson(x, c), DegenerateVariable);
    EXPECT_THROW(pearson({1, 2}, {1, 2}), std::invalid_argument);
    EXPECT_THROW(pearson({1, 2, 3}, {1, 2}), std::invalid_argument);
}

TEST(Pearson, PValueMatchesNumericIntegration) {
    for (double r : {0.05, 0.2, 0.45, 0.8}) {
        for (std::size_t n : {5u, 12u, 50u}) {
            double nu = static_cast<double>(n) - 2;
            double t = r * std::sqrt(nu / (1 - r * r));
            EXPECT_NEAR(pearson_p_value(r, n), t_tail_numeric(t, nu), 1e-8) << "r=" << r << " n=" << n;
        }
    }
    EXPECT_NEAR(pearson_p_value(0.0, 30), 1.0, 1e-15);
}

TEST(Pearson, SymmetricAndAffineInvariant) {
    RngStream rng(51, 0);
    std::vector<double> x(40), y(40);
    for (int i = 0; i < 40; ++i) {
        x[i] = rng.normal();
        y[i] = 0.5 * x[i] + rng.normal();
    }
    EXPECT_EQ(pearson(x, y).r, pearson(y, x).r);
    std::vector<double> ax, bx;
    for (double v : x) {
        ax.push_back(3.5 * v - 2);
        bx.push_back(-0.25 * v + 7);
    }
    EXPECT_NEAR(pearson(ax, y).r, pearson(x, y).r, 1e-12);
    EXPECT_NEAR(pearson(bx, y).r, -pearson(x, y).r, 1e-12);
}

TEST(Pearson, Stars) {
    EXPECT_EQ(significance_stars(0.01), "**");
    EXPECT_EQ(significance_stars(0.07), "*");
    EXPECT_EQ(significance_stars(0.2), "");
}

TEST(Correlations, DatasetInvariants) {
    auto recs = generate_dataset(4, 30, 3).records;
    auto rep = correlations(recs);
    auto idx = [](WitnessId w) { return static_cast<std::size_t>(w); };
    EXPECT_NEAR(rep.r[idx(WitnessId::imag)][idx(WitnessId::real)], -1.0, 1e-9);
    for (std::size_t a = 0; a < 8; ++a) {
        EXPECT_EQ(rep.r[a][a], 1.0);
        for (std::size_t b = 0; b < 8; ++b) {
            EXPECT_EQ(rep.r[a][b], rep.r[b][a]);
            EXPECT_LE(std::abs(rep.r[a][b]), 1.0 + 1e-12);
        }
    }
}

TEST(Correlations, ConstantColumnMarkedUndefined) {
    std::vector<WitnessRecord> recs;
    for (int i = 0; i < 5; ++i) recs.push_back(rec(FamilyId::haar, i, {double(i), 1, double(i * i), 0.5, 0.2, 0.1 * i, 0.3, 0.4 * i}));
    auto rep = correlations(recs);
    EXPECT_FALSE(rep.defined[1][0]);
    EXPECT_TRUE(rep.defined[0][2]);
    EXPECT_TRUE(std::isnan(rep.r[1][0]));
}

TEST(Pairwise, StrictWinsAndLosses) {
    std::vector<WitnessRecord> recs;
    for (int i = 0; i < 3; ++i) recs.push_back(rec(FamilyId::haar, i, {1, 1, 1, 1, 1, 1, 1, 1}));
    for (int i = 0; i < 4; ++i) recs.push_back(rec(FamilyId::ferm, i, {0, 0, 0, 0, 0, 0, 0, 0}));
    for (int i = 0; i < 2; ++i) recs.push_back(rec(FamilyId::coh, i, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}));
    auto t = pairwise_table(recs);
    EXPECT_EQ(*t.win_pct(FamilyId::haar, WitnessId::ent), 100.0);
    EXPECT_EQ(*t.win_pct(FamilyId::ferm, WitnessId::ent), 0.0);
    // beats the four ferm states, loses to the three haar states
    EXPECT_DOUBLE_EQ(*t.win_pct(FamilyId::coh, WitnessId::ent), 400.0 / 7.0);
    // free families sit out their own witness
    EXPECT_FALSE(t.win_pct(FamilyId::ferm, WitnessId::ferm));
    EXPECT_EQ(*t.win_pct(FamilyId::haar, WitnessId::ferm), 100.0);
    EXPECT_EQ(t.cells.at({FamilyId::haar, WitnessId::ent}).comparisons, 3u * 6u);
}

TEST(Pairwise, TiesScoreHalf) {
    std::vector<WitnessRecord> recs;
    for (int i = 0; i < 3; ++i) recs.push_back(rec(FamilyId::haar, i, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}));
    for (int i = 0; i < 2; ++i) recs.push_back(rec(FamilyId::coh, i, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}));
    for (int i = 0; i < 2; ++i) recs.push_back(rec(FamilyId::stab, i, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}));
    auto t = pairwise_table(recs);
    for (auto f : t.families)
        for (auto w : kAllWitnesses) {
            auto v = t.win_pct(f, w);
            if (v) {
                EXPECT_EQ(*v, 50.0);
            }
        }
    EXPECT_FALSE(t.win_pct(FamilyId::coh, WitnessId::coh));
    EXPECT_FALSE(t.win_pct(FamilyId::stab, WitnessId::stab));
}

TEST(Pairwise, ExclusionMap) {
    EXPECT_EQ(pairwise_exclusions(WitnessId::ent), (std::set<FamilyId>{FamilyId::ent, FamilyId::uent}));
    EXPECT_EQ(pairwise_exclusions(WitnessId::sn), (std::set<FamilyId>{FamilyId::sn, FamilyId::uent}));
    EXPECT_EQ(pairwise_exclusions(WitnessId::uent), (std::set<FamilyId>{FamilyId::uent}));
    EXPECT_EQ(pairwise_exclusions(WitnessId::coh), (std::set<FamilyId>{FamilyId::coh}));
}

TEST(Pairwise, ZeroSumOnRealData) {
    auto recs = generate_dataset(3, 20, 5).records;
    auto t = pairwise_table(recs);
    for (auto w : kAllWitnesses) {
        double score = 0;
        std::uint64_t comps = 0;
        for (auto f : t.families) {
            auto it = t.cells.find({f, w});
            if (it == t.cells.end()) continue;
            EXPECT_GE(it->second.win_pct, 0.0);
            EXPECT_LE(it->second.win_pct, 100.0);
            score += it->second.score;
            comps += it->second.comparisons;
        }
        EXPECT_NEAR(100.0 * score / static_cast<double>(comps), 50.0, 1e-9) << to_string(w);
    }
}

TEST(Pairwise, FewerThanTwoFamiliesThrows) {
    std::vector<WitnessRecord> recs;
    for (int i = 0; i < 3; ++i) recs.push_back(rec(FamilyId::haar, i, {1, 1, 1, 1, 1, 1, 1, 1}));
    EXPECT_THROW(pairwise_table(recs), std::invalid_argument);
}

TEST(Pca, LineIsOneDimensional) {
    std::vector<WitnessRecord> recs;
    for (int i = 0; i < 20; ++i) {
        double t = 0.05 * i;
        recs.push_back(rec(FamilyId::haar, i, {t, 2 * t, 0, 1 - t, 0.5 * t, 3 * t, t, 0.1 + t}));
    }
    auto p = pca(recs);
    EXPECT_NEAR(p.explained_variance_ratio[0], 1.0, 1e-10);
    auto raw = pca(recs, {WitnessId::imag}, false);
    EXPECT_NEAR(raw.explained_variance_ratio[0], 1.0, 1e-10);
}

TEST(Pca, IsotropicGaussian) {
    RngStream rng(52, 0);
    std::vector<WitnessRecord> recs;
    for (int i = 0; i < 20000; ++i) {
        std::array<double, 8> v{};
        for (auto& x : v) x = rng.normal();
        recs.push_back(rec(FamilyId::haar, i, v));
    }
    auto p = pca(recs, {WitnessId::imag}, false);
    ASSERT_EQ(p.explained_variance_ratio.size(), 7u);
    for (double r : p.explained_variance_ratio) EXPECT_NEAR(r, 1.0 / 7.0, 0.01);
}

TEST(Pca, InvariantsOnDataset) {
    auto recs = generate_dataset(4, 25, 9).records;
    for (bool standardize : {true, false}) {
        auto p = pca(recs, {WitnessId::imag}, standardize);
        double s = 0, ev = 0;
        for (std::size_t k = 0; k < p.explained_variance_ratio.size(); ++k) {
            s += p.explained_variance_ratio[k];
            ev += p.eigenvalues[k];
            if (k) {
                EXPECT_LE(p.explained_variance_ratio[k], p.explained_variance_ratio[k - 1]);
            }
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
        EXPECT_NEAR(ev, p.covariance_trace, 1e-9);
        EXPECT_EQ(p.loadings.rows(), 7);
        EXPECT_EQ(p.projections.rows(), static_cast<Eigen::Index>(recs.size()));
        EXPECT_EQ(p.projections.cols(), 2);
        for (Eigen::Index k = 0; k < 7; ++k) {
            Eigen::Index big;
            p.loadings.col(k).cwiseAbs().maxCoeff(&big);
            EXPECT_GT(p.loadings(big, k), 0.0);
        }
    }
}

TEST(Pca, ConstantColumnReportedNotFatal) {
    std::vector<WitnessRecord> recs;
    RngStream rng(53, 0);
    for (int i = 0; i < 30; ++i) recs.push_back(rec(FamilyId::haar, i, {rng.uniform(), 1, rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()}));
    auto p = pca(recs);
    ASSERT_EQ(p.constant_variables.size(), 1u);
    EXPECT_EQ(p.constant_variables[0], WitnessId::ferm);
    double s = 0;
    for (double r : p.explained_variance_ratio) s += r;
    EXPECT_NEAR(s, 1.0, 1e-10);
}

TEST(Summary, Quartiles) {
    auto s = summarize({4, 1, 3, 2, 5});
    EXPECT_EQ(s.count, 5u);
    EXPECT_DOUBLE_EQ(s.mean, 3.0);
    EXPECT_DOUBLE_EQ(s.median, 3.0);
    EXPECT_DOUBLE_EQ(s.q1, 2.0);
    EXPECT_DOUBLE_EQ(s.q3, 4.0);
    EXPECT_NEAR(s.sd, std::sqrt(2.5), 1e-15);
    auto t = summarize({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(t.median, 2.5);
    EXPECT_DOUBLE_EQ(t.q1, 1.75);
}

TEST(Averages, PerFamilyRows) {
    auto recs = generate_dataset(3, 4, 11).records;
    auto rows = averages(recs);
    ASSERT_EQ(rows.size(), 9u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.stats.count, 4u);
        EXPECT_LE(r.stats.q1, r.stats.median);
        EXPECT_LE(r.stats.median, r.stats.q3);
    }
}
