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

// qrtx: generate witness datasets, analyse them, print the exact tables.

#include <iostream>

#include "CLI11.hpp"
#include "qrtx/qrtx.hpp"

namespace {

using namespace qrtx;

std::vector<FamilyId> parse_families(const std::vector<std::string>& names) {
    std::vector<FamilyId> out;
    for (const auto& s : names) {
        if (s == "all") return {kAllFamilies.begin(), kAllFamilies.end()};
        try {
            out.push_back(parse_family(s));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
    }
    return out;
}

struct GenerateFlags {
    std::string config;
    std::vector<int> n_list;
    int per_family = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> families;
    std::string out;
    int threads = 0;
    int sn_depth = 0;
    bool persist = false;
    std::string state_format;
    std::vector<std::string> analyses;
    bool raw_pca = false;
    double tie_eps = 0;
    bool echo = false;
};

// File first, then explicit flags, then QRT_SEED.
RunConfig resolve(const GenerateFlags& f, CLI::App* cmd) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config_file(f.config);
    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--n")) c.n_list = f.n_list;
    if (given("--per-family")) c.per_family = f.per_family;
    if (given("--seed")) c.seed = f.seed;
    if (given("--families")) c.families = parse_families(f.families);
    if (given("--out")) c.outputs = f.out;
    if (given("--threads")) c.threads = f.threads;
    if (given("--sn-depth")) c.sn_depth = f.sn_depth;
    if (given("--persist-states")) c.persist_states = true;
    if (given("--state-format")) c.state_format = f.state_format;
    if (given("--raw-pca")) c.pca_standardize = false;
    if (given("--tie-eps")) c.tie_eps = f.tie_eps;
    for (const auto& a : f.analyses) {
        if (a == "all") c.analyses = {true, true, true, true};
        else if (a == "correlations") c.analyses.correlations = true;
        else if (a == "pairwise") c.analyses.pairwise = true;
        else if (a == "pca") c.analyses.pca = true;
        else if (a == "averages") c.analyses.averages = true;
        else throw ValidationError("unknown analysis '" + a + "'");
    }
    apply_env(c);
    c.validate();
    return c;
}

void add_generate_flags(CLI::App* cmd, GenerateFlags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--n", f.n_list, "qubit counts")->delimiter(',');
    cmd->add_option("--per-family", f.per_family, "states per family");
    cmd->add_option("--seed", f.seed, "master seed (QRT_SEED overrides)");
    cmd->add_option("--families", f.families, "families or 'all'")->delimiter(',');
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--threads", f.threads, "worker threads (0: hardware concurrency)");
    cmd->add_option("--sn-depth", f.sn_depth, "gates per sn circuit (0: n^3)");
    cmd->add_flag("--persist-states", f.persist, "also write state amplitudes");
    cmd->add_option("--state-format", f.state_format, "bin or csv");
    cmd->add_option("--analyses", f.analyses, "correlations,pairwise,pca,averages or all")->delimiter(',');
    cmd->add_flag("--raw-pca", f.raw_pca, "PCA on the covariance of unscaled witnesses");
    cmd->add_option("--tie-eps", f.tie_eps, "tie tolerance for pairwise scoring");
    cmd->add_flag("--echo-config", f.echo, "print the resolved configuration and exit");
}

int run(int argc, char** argv) {
    CLI::App app{"qrtx: resource-theory witness datasets"};
    app.require_subcommand(1);

    GenerateFlags gen;
    auto* g = app.add_subcommand("generate", "sample states and write dataset CSVs with manifests");
    add_generate_flags(g, gen);

    std::string a_input, a_which = "all", a_out;
    bool a_raw = false;
    double a_eps = 1e-9;
    auto* an = app.add_subcommand("analyze", "correlations, pairwise, pca or averages on a dataset CSV");
    an->add_option("dataset", a_input, "dataset CSV")->required();
    an->add_option("--which", a_which, "correlations | pairwise | pca | averages | all");
    an->add_option("--out", a_out, "report directory (default: next to the dataset)");
    an->add_flag("--raw-pca", a_raw, "PCA without standardizing");
    an->add_option("--tie-eps", a_eps, "tie tolerance for pairwise scoring");

    std::string o_target = "table1", o_out;
    int o_lo = 3, o_hi = 8, o_per = 1000, o_threads = 0;
    std::uint64_t o_seed = 1;
    bool o_check = false;
    auto* orc = app.add_subcommand("oracle", "exact expected witness values");
    orc->add_option("target", o_target, "table1 | props");
    orc->add_option("--n-min", o_lo);
    orc->add_option("--n-max", o_hi);
    orc->add_option("--out", o_out, "write <target>.csv and <target>.md here");
    orc->add_flag("--check", o_check, "Monte-Carlo check of every cell (4 standard errors)");
    orc->add_option("--per-family", o_per, "samples per family for --check");
    orc->add_option("--seed", o_seed);
    orc->add_option("--threads", o_threads);

    GenerateFlags st;
    std::string st_read;
    auto* sc = app.add_subcommand("states", "dump raw state amplitudes");
    add_generate_flags(sc, st);
    sc->add_option("--read", st_read, "print a binary state dump as CSV instead of sampling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*g) {
        RunConfig cfg = resolve(gen, g);
        if (gen.echo) {
            std::cout << to_json(cfg).dump(2) << '\n';
            return 0;
        }
        cmd_generate(cfg, &std::cout);
        return 0;
    }
    if (*an) {
        fs::path in(a_input);
        fs::path out = a_out.empty() ? (in.has_parent_path() ? in.parent_path() : fs::path(".")) : fs::path(a_out);
        AnalyzeOptions opt{!a_raw, a_eps};
        std::vector<std::string> which = a_which == "all"
                                             ? std::vector<std::string>{"correlations", "pairwise", "pca", "averages"}
                                             : std::vector<std::string>{a_which};
        for (const auto& w : which) {
            auto stem = cmd_analyze(in, w, out, opt);
            std::cout << "wrote " << stem.string() << "." << w << ".*\n";
        }
        return 0;
    }
    if (*orc) {
        if (o_lo < 1 || o_hi > kMaxQubits || o_lo > o_hi) throw ValidationError("oracle: need 1 <= n-min <= n-max <= 8");
        if (const char* s = std::getenv("QRT_SEED"); s && *s) o_seed = std::strtoull(s, nullptr, 10);
        auto cells = oracle_cells(o_target, o_lo, o_hi);
        if (!o_out.empty()) {
            write_file(fs::path(o_out) / (o_target + ".csv"), oracle_csv(cells));
            write_file(fs::path(o_out) / (o_target + ".md"), oracle_markdown(cells));
        }
        if (!o_check) {
            std::cout << oracle_markdown(cells);
            return 0;
        }
        auto checks = oracle_check(cells, o_per, o_seed, o_threads);
        int failed = 0;
        for (const auto& c : checks) {
            std::cout << (c.pass ? "PASS " : "FAIL ") << to_string(c.cell.family) << " " << to_string(c.cell.witness)
                      << " n=" << c.cell.n << " exact=" << to_string(c.cell.exact) << " mean=" << c.mean
                      << " se=" << c.se << " z=" << c.z << '\n';
            failed += !c.pass;
        }
        std::cout << (checks.size() - static_cast<std::size_t>(failed)) << "/" << checks.size() << " cells agree\n";
        return failed ? 3 : 0;
    }
    if (*sc) {
        if (!st_read.empty()) {
            std::istringstream is(read_file(st_read));
            auto recs = read_states_binary(is);
            for (const auto& r : recs) {
                std::cout << to_string(r.family) << ',' << r.n << ',' << r.state_id;
                for (Eigen::Index k = 0; k < r.state.amplitudes().size(); ++k)
                    std::cout << ',' << format_double(r.state[k].real()) << ',' << format_double(r.state[k].imag());
                std::cout << '\n';
            }
            return 0;
        }
        RunConfig cfg = resolve(st, sc);
        cfg.persist_states = true;
        cmd_generate(cfg, &std::cout);
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qrtx::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qrtx::SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qrtx::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
