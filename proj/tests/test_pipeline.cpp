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
#include <unistd.h>

#include "qrtx/qrtx.hpp"

using namespace qrtx;

namespace {

class TempDir : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qrtx_" + std::to_string(::getpid()) + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

RunConfig small_config(const fs::path& out) {
    RunConfig c;
    c.n_list = {3};
    c.per_family = 2;
    c.seed = 7;
    c.outputs = out.string();
    return c;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Hashing, KnownDigests) {
    EXPECT_EQ(sha1_hex("abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
    EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
    EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_F(TempDir, GenerateWritesCsvAndManifest) {
    auto out = cmd_generate(small_config(dir_));
    ASSERT_EQ(out.size(), 1u);
    std::string csv = read_file(dir_ / "dataset_n3.csv");
    EXPECT_EQ(count_lines(csv), 19u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
    EXPECT_EQ(out[0].rows, 18u);
    auto m = json::parse(read_file(dir_ / "dataset_n3.manifest.json"));
    EXPECT_EQ(m["content_hash"], git_blob_hash(csv));
    EXPECT_EQ(m["rows"], 18);
    EXPECT_EQ(m["config"]["per_family"], 2);
    EXPECT_EQ(m["config"]["seed"], 7);
    for (auto f : kAllFamilies) EXPECT_EQ(m["family_counts"][to_string(f)], 2);
    // the manifest alone is enough to rerun
    RunConfig again = config_from_json(m["config"]);
    again.outputs = (dir_ / "again").string();
    auto out2 = cmd_generate(again);
    EXPECT_EQ(out2[0].content_hash, out[0].content_hash);
}

TEST_F(TempDir, GenerateIsDeterministic) {
    auto a = cmd_generate(small_config(dir_ / "a"));
    auto cfg = small_config(dir_ / "b");
    cfg.threads = 3;
    auto b = cmd_generate(cfg);
    EXPECT_EQ(a[0].content_hash, b[0].content_hash);
    EXPECT_EQ(read_file(a[0].csv), read_file(b[0].csv));
    cfg.seed = 8;
    cfg.outputs = (dir_ / "c").string();
    EXPECT_NE(cmd_generate(cfg)[0].content_hash, a[0].content_hash);
}

TEST_F(TempDir, CsvRoundTripIsExact) {
    auto recs = generate_dataset(4, 3, 2).records;
    write_file(dir_ / "d.csv", to_csv(recs));
    auto back = load_dataset(dir_ / "d.csv");
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(back[i].family, recs[i].family);
        EXPECT_EQ(back[i].state_id, recs[i].state_id);
        EXPECT_EQ(back[i].seed, recs[i].seed);
        for (auto w : kAllWitnesses) EXPECT_EQ(back[i].values[w], recs[i].values[w]);
    }
}

TEST_F(TempDir, PersistedStatesReproduceWitnesses) {
    for (std::string fmt : {"bin", "csv"}) {
        auto cfg = small_config(dir_ / fmt);
        cfg.n_list = {3, 4};
        cfg.persist_states = true;
        cfg.state_format = fmt;
        cmd_generate(cfg);
        for (int n : {3, 4}) {
            auto recs = load_dataset(dir_ / fmt / (dataset_stem(n) + ".csv"));
            std::string raw = read_file(dir_ / fmt / (dataset_stem(n) + ".states." + fmt));
            std::vector<StateVector> states;
            if (fmt == "bin") {
                std::istringstream is(raw);
                auto sr = read_states_binary(is);
                ASSERT_EQ(sr.size(), recs.size());
                for (std::size_t i = 0; i < sr.size(); ++i) {
                    EXPECT_EQ(sr[i].family, recs[i].family);
                    EXPECT_EQ(sr[i].state_id, recs[i].state_id);
                    EXPECT_EQ(sr[i].n, n);
                    states.push_back(sr[i].state);
                }
                EXPECT_EQ(raw.size(), recs.size() * (6 + 16 * dim_of(n)));
            } else {
                std::istringstream is(raw);
                std::string line;
                while (std::getline(is, line)) {
                    auto cells = detail::split_csv_line(line);
                    ASSERT_EQ(cells.size(), 3 + 2 * dim_of(n));
                    CVector v(static_cast<Eigen::Index>(dim_of(n)));
                    for (Eigen::Index k = 0; k < v.size(); ++k)
                        v[k] = cplx(std::stod(cells[3 + 2 * k]), std::stod(cells[4 + 2 * k]));
                    states.push_back(StateVector::from_amplitudes(v, n));
                }
            }
            ASSERT_EQ(states.size(), recs.size());
            for (std::size_t i = 0; i < states.size(); ++i) {
                auto v = witness_vector(states[i]);
                for (auto w : kAllWitnesses) EXPECT_NEAR(v[w], recs[i].values[w], 1e-9) << fmt << " " << to_string(w);
            }
        }
    }
}

TEST(Schema, Diagnostics) {
    auto expect_msg = [](const std::string& text, const std::string& needle) {
        std::istringstream is(text);
        try {
            read_csv(is);
            ADD_FAILURE() << "no error for: " << needle;
        } catch (const SchemaError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    std::string header = kCsvHeader;
    expect_msg("", "missing header");
    std::string bad = header;
    bad.replace(bad.find("lambda_coh"), 10, "lambda_cohx");
    expect_msg(bad + "\n", "header column 9: expected 'lambda_coh', found 'lambda_cohx'");
    expect_msg(header.substr(0, header.rfind(',')) + "\n", "header column 12");
    expect_msg(header + "\nhaar,3,0,1,0.1,0.2\n", "line 2: expected 12 columns, found 6");
    expect_msg(header + "\nhaar,3,0,1,0.1,0.2,x,0.4,0.5,0.6,0.7,0.8\n", "line 2, column lambda_imag");
    expect_msg(header + "\nnope,3,0,1,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n", "column family");
    expect_msg(header + "\nhaar,3,0,-,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n", "column seed");
}

TEST(Config, JsonParsingAndValidation) {
    auto c = config_from_json(json::parse(R"({"n_list":[3,5],"per_family":10,"seed":99,"families":["haar","stab"],
        "analyses":{"pca":true},"pca_standardize":false,"state_format":"csv"})"));
    EXPECT_EQ(c.n_list, (std::vector<int>{3, 5}));
    EXPECT_EQ(c.per_family, 10);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.families, (std::vector<FamilyId>{FamilyId::haar, FamilyId::stab}));
    EXPECT_TRUE(c.analyses.pca);
    EXPECT_FALSE(c.analyses.pairwise);
    EXPECT_FALSE(c.pca_standardize);
    EXPECT_THROW(config_from_json(json::parse(R"({"n_lst":[3]})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"families":["bogus"]})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"per_family":"many"})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"analyses":{"pcb":true}})")), ValidationError);
    RunConfig bad;
    bad.n_list = {9};
    EXPECT_THROW(bad.validate(), ValidationError);
    bad.n_list = {3};
    bad.per_family = 0;
    EXPECT_THROW(bad.validate(), ValidationError);
    // echo then parse is the identity
    RunConfig back = config_from_json(to_json(c));
    EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
}

TEST(Config, SeedEnvironmentOverride) {
    RunConfig c;
    c.seed = 5;
    ::setenv("QRT_SEED", "12345", 1);
    apply_env(c);
    EXPECT_EQ(c.seed, 12345u);
    ::setenv("QRT_SEED", "12x", 1);
    EXPECT_THROW(apply_env(c), ValidationError);
    ::unsetenv("QRT_SEED");
    c.seed = 5;
    apply_env(c);
    EXPECT_EQ(c.seed, 5u);
}

TEST_F(TempDir, AnalyzeWritesReportsNamingInputHash) {
    auto cfg = small_config(dir_);
    cfg.n_list = {4};
    cfg.per_family = 6;
    auto g = cmd_generate(cfg);
    for (std::string which : {"correlations", "pairwise", "pca", "averages"}) {
        auto stem = cmd_analyze(g[0].csv, which, dir_ / "reports");
        auto meta = json::parse(read_file(stem.string() + "." + which + ".meta.json"));
        EXPECT_EQ(meta["input_hash"], g[0].content_hash);
        EXPECT_EQ(meta["input"], "dataset_n4.csv");
        std::string md = read_file(stem.string() + "." + which + ".md");
        EXPECT_NE(md.find(g[0].content_hash), std::string::npos);
    }
    std::string r = read_file(dir_ / "reports" / "dataset_n4.correlations.r.csv");
    EXPECT_EQ(count_lines(r), 9u);
    // imag row, real column
    std::istringstream is(r);
    std::string line;
    for (int k = 0; k < 4; ++k) std::getline(is, line);
    auto cells = detail::split_csv_line(line);
    EXPECT_EQ(cells[0], "lambda_imag");
    EXPECT_NEAR(std::stod(cells[4]), -1.0, 1e-9);
    std::string var = read_file(dir_ / "reports" / "dataset_n4.pca_variance.csv");
    EXPECT_EQ(count_lines(var), 8u);
    std::string pw = read_file(dir_ / "reports" / "dataset_n4.pairwise.csv");
    EXPECT_EQ(count_lines(pw), 10u);
    std::string av = read_file(dir_ / "reports" / "dataset_n4.averages.csv");
    EXPECT_EQ(count_lines(av), 10u);
}

TEST_F(TempDir, AnalyzeErrors) {
    EXPECT_THROW(cmd_analyze(dir_ / "missing.csv", "pca", dir_), IoError);
    write_file(dir_ / "bad.csv", "family,n\nhaar,3\n");
    EXPECT_THROW(cmd_analyze(dir_ / "bad.csv", "pca", dir_), ValidationError);
    auto g = cmd_generate(small_config(dir_));
    EXPECT_THROW(cmd_analyze(g[0].csv, "clusters", dir_), ValidationError);
}

TEST(Oracle, TableShapes) {
    auto cells = oracle_cells("table1", 3, 8);
    EXPECT_EQ(cells.size(), 8u * 3u * 6u);
    std::string csv = oracle_csv(cells);
    EXPECT_EQ(count_lines(csv), cells.size() + 1);
    EXPECT_NE(csv.find("haar,ent,3,1/3,"), std::string::npos);
    EXPECT_THROW(oracle_cells("table9", 3, 3), ValidationError);
}

TEST(Oracle, CheckAtThreeQubits) {
    auto checks = oracle_check(oracle_cells("props", 3, 3), 300, 4, 0);
    for (const auto& c : checks) {
        EXPECT_TRUE(c.pass) << to_string(c.cell.family) << " " << to_string(c.cell.witness) << " z=" << c.z;
        if (c.cell.family == FamilyId::ent && c.cell.witness == WitnessId::uent) {
            EXPECT_NEAR(c.mean, 1.0 / 3.0, 0.05);
        }
    }
}

TEST(Oracle, FermFamilyIsAlwaysFree) {
    auto checks = oracle_check({OracleCell{FamilyId::ferm, WitnessId::ferm, 4, Rational(1)}}, 50, 4, 0);
    ASSERT_EQ(checks.size(), 1u);
    EXPECT_TRUE(checks[0].pass);
    EXPECT_NEAR(checks[0].mean, 1.0, 1e-8);
}

TEST(Oracle, HaarStabMeanAtFourQubits) {
    GenerateOptions go;
    go.families = {FamilyId::haar};
    auto recs = generate_dataset(4, 200, 13, go).records;
    auto m = mc_verdict(OracleCell{FamilyId::haar, WitnessId::stab, 4, Rational(3, 19)}, column(recs, WitnessId::stab));
    EXPECT_TRUE(m.pass) << "z=" << m.z;
}
