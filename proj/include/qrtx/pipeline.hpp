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

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrtx/dataset.hpp"
#include "qrtx/oracle.hpp"
#include "qrtx/stats.hpp"

namespace qrtx {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Bad configuration or bad input data: exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// Filesystem trouble: exit code 1.
struct IoError : Error {
    using Error::Error;
};

inline std::string sha1_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha1(), nullptr) != 1) throw Error("sha1 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

// Same digest `git hash-object` prints for a file with these bytes.
inline std::string git_blob_hash(std::string_view bytes) {
    std::string obj = "blob " + std::to_string(bytes.size());
    obj.push_back('\0');
    obj.append(bytes);
    return sha1_hex(obj);
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const fs::path& p, std::string_view bytes) {
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + p.string());
}

struct AnalysisToggles {
    bool correlations = false, pairwise = false, pca = false, averages = false;
    bool any() const { return correlations || pairwise || pca || averages; }
};

struct RunConfig {
    std::vector<int> n_list{4};
    int per_family = 200;
    std::uint64_t seed = 1;
    std::vector<FamilyId> families{kAllFamilies.begin(), kAllFamilies.end()};
    std::string outputs = "out";
    int threads = 0;
    int sn_depth = 0;
    bool persist_states = false;
    std::string state_format = "bin";  // bin | csv
    AnalysisToggles analyses;
    bool pca_standardize = true;
    double tie_eps = 1e-9;

    void validate() const {
        if (n_list.empty()) throw ValidationError("config: n_list is empty");
        for (int n : n_list)
            if (n < 1 || n > kMaxQubits) throw ValidationError("config: n_list entries must be in 1..8");
        if (per_family < 1) throw ValidationError("config: per_family must be >= 1");
        if (families.empty()) throw ValidationError("config: families is empty");
        if (sn_depth < 0) throw ValidationError("config: sn_depth must be >= 0");
        if (threads < 0) throw ValidationError("config: threads must be >= 0");
        if (state_format != "bin" && state_format != "csv") throw ValidationError("config: state_format is bin or csv");
        if (!(tie_eps >= 0)) throw ValidationError("config: tie_eps must be >= 0");
    }
};

inline json to_json(const RunConfig& c) {
    json j;
    j["n_list"] = c.n_list;
    j["per_family"] = c.per_family;
    j["seed"] = c.seed;
    std::vector<std::string> fams;
    for (auto f : c.families) fams.emplace_back(to_string(f));
    j["families"] = fams;
    j["outputs"] = c.outputs;
    j["sn_depth"] = c.sn_depth;
    j["persist_states"] = c.persist_states;
    j["state_format"] = c.state_format;
    j["analyses"] = {{"correlations", c.analyses.correlations},
                     {"pairwise", c.analyses.pairwise},
                     {"pca", c.analyses.pca},
                     {"averages", c.analyses.averages}};
    j["pca_standardize"] = c.pca_standardize;
    j["tie_eps"] = c.tie_eps;
    return j;
}

// Unknown keys are rejected so that typos do not silently fall back to defaults.
inline RunConfig config_from_json(const json& j, RunConfig c = {}) {
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const json& v = it.value();
            if (k == "n_list") c.n_list = v.get<std::vector<int>>();
            else if (k == "per_family") c.per_family = v.get<int>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "families") {
                c.families.clear();
                for (const auto& f : v) c.families.push_back(parse_family(f.get<std::string>()));
            } else if (k == "outputs") c.outputs = v.get<std::string>();
            else if (k == "threads") c.threads = v.get<int>();
            else if (k == "sn_depth") c.sn_depth = v.get<int>();
            else if (k == "persist_states") c.persist_states = v.get<bool>();
            else if (k == "state_format") c.state_format = v.get<std::string>();
            else if (k == "pca_standardize") c.pca_standardize = v.get<bool>();
            else if (k == "tie_eps") c.tie_eps = v.get<double>();
            else if (k == "analyses") {
                for (auto a = v.begin(); a != v.end(); ++a) {
                    bool on = a.value().get<bool>();
                    if (a.key() == "correlations") c.analyses.correlations = on;
                    else if (a.key() == "pairwise") c.analyses.pairwise = on;
                    else if (a.key() == "pca") c.analyses.pca = on;
                    else if (a.key() == "averages") c.analyses.averages = on;
                    else throw ValidationError("config: unknown analysis '" + a.key() + "'");
                }
            } else {
                throw ValidationError("config: unknown key '" + k + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
}

inline RunConfig load_config_file(const fs::path& p) {
    std::string text = read_file(p);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError("config " + p.string() + ": " + e.what());
    }
    return config_from_json(j);
}

// QRT_SEED wins over both the file and the flags.
inline void apply_env(RunConfig& c) {
    if (const char* s = std::getenv("QRT_SEED"); s && *s) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (*end != '\0') throw ValidationError("QRT_SEED is not an unsigned integer");
        c.seed = v;
    }
}

inline std::string dataset_stem(int n) { return "dataset_n" + std::to_string(n); }

// ---- report writers ----

struct ReportContext {
    std::string input_name;
    std::string input_hash;
};

inline std::string fmt_fixed(double v, int digits) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

inline std::string provenance_line(const ReportContext& ctx) {
    return "Input: `" + ctx.input_name + "` (git blob " + ctx.input_hash + ")\n\n";
}

inline void write_correlation_report(const fs::path& stem, const CorrelationReport& rep, const ReportContext& ctx) {
    std::ostringstream r, p, md;
    r << "witness";
    for (auto w : kAllWitnesses) r << ",lambda_" << to_string(w);
    r << '\n';
    p << r.str();
    for (std::size_t a = 0; a < 8; ++a) {
        r << "lambda_" << to_string(kAllWitnesses[a]);
        p << "lambda_" << to_string(kAllWitnesses[a]);
        for (std::size_t b = 0; b < 8; ++b) {
            r << ',' << format_double(rep.r[a][b]);
            p << ',' << format_double(rep.p[a][b]);
        }
        r << '\n';
        p << '\n';
    }
    md << "# Pearson correlations\n\n" << provenance_line(ctx) << "N = " << rep.count
       << ". `*` p < 0.10, `**` p < 0.05 (two-sided t-test).\n\n|   |";
    for (auto w : kAllWitnesses) md << " " << to_string(w) << " |";
    md << "\n|---|";
    for (std::size_t b = 0; b < 8; ++b) md << "---|";
    md << '\n';
    for (std::size_t a = 0; a < 8; ++a) {
        md << "| " << to_string(kAllWitnesses[a]) << " |";
        for (std::size_t b = 0; b < 8; ++b) {
            if (b > a) md << "   |";
            else if (!rep.defined[a][b]) md << " n/a |";
            else md << ' ' << fmt_fixed(rep.r[a][b], 2) << (a == b ? "" : significance_stars(rep.p[a][b])) << " |";
        }
        md << '\n';
    }
    write_file(stem.string() + ".correlations.r.csv", r.str());
    write_file(stem.string() + ".correlations.p.csv", p.str());
    write_file(stem.string() + ".correlations.md", md.str());
}

inline void write_pairwise_report(const fs::path& stem, const PairwiseTable& t, const ReportContext& ctx) {
    std::ostringstream csv, md;
    csv << "family";
    for (auto w : kAllWitnesses) csv << ",lambda_" << to_string(w);
    csv << '\n';
    md << "# Pairwise comparison (win %)\n\n" << provenance_line(ctx) << "Ties within eps = " << t.eps
       << " score 1/2. `--` marks families free for that witness.\n\n| family |";
    for (auto w : kAllWitnesses) md << " " << to_string(w) << " |";
    md << "\n|---|";
    for (std::size_t b = 0; b < 8; ++b) md << "---|";
    md << '\n';
    for (auto f : t.families) {
        csv << to_string(f);
        md << "| " << to_string(f) << " |";
        for (auto w : kAllWitnesses) {
            auto v = t.win_pct(f, w);
            csv << ',' << (v ? format_double(*v) : "");
            md << ' ' << (v ? fmt_fixed(*v, 1) : "--") << " |";
        }
        csv << '\n';
        md << '\n';
    }
    write_file(stem.string() + ".pairwise.csv", csv.str());
    write_file(stem.string() + ".pairwise.md", md.str());
}

inline void write_pca_report(const fs::path& stem, const PcaResult& res, const std::vector<WitnessRecord>& recs,
                             const ReportContext& ctx) {
    std::ostringstream var, load, proj, md;
    var << "component,eigenvalue,explained_variance_ratio\n";
    for (std::size_t k = 0; k < res.eigenvalues.size(); ++k)
        var << "pc" << k + 1 << ',' << format_double(res.eigenvalues[k]) << ','
            << format_double(res.explained_variance_ratio[k]) << '\n';
    load << "witness";
    for (std::size_t k = 0; k < res.variables.size(); ++k) load << ",pc" << k + 1;
    load << '\n';
    for (std::size_t v = 0; v < res.variables.size(); ++v) {
        load << "lambda_" << to_string(res.variables[v]);
        for (Eigen::Index k = 0; k < res.loadings.cols(); ++k)
            load << ',' << format_double(res.loadings(static_cast<Eigen::Index>(v), k));
        load << '\n';
    }
    proj << "family,n,state_id,pc1,pc2\n";
    for (std::size_t i = 0; i < recs.size(); ++i)
        proj << to_string(recs[i].family) << ',' << recs[i].n << ',' << recs[i].state_id << ','
             << format_double(res.projections(static_cast<Eigen::Index>(i), 0)) << ','
             << format_double(res.projections(static_cast<Eigen::Index>(i), 1)) << '\n';
    md << "# Principal component analysis\n\n" << provenance_line(ctx) << "Variables standardized: "
       << (res.standardized ? "yes" : "no") << ". Excluded: imag.\n\n| component | explained variance |\n|---|---|\n";
    for (std::size_t k = 0; k < res.explained_variance_ratio.size(); ++k)
        md << "| pc" << k + 1 << " | " << fmt_fixed(res.explained_variance_ratio[k], 4) << " |\n";
    if (!res.constant_variables.empty()) {
        md << "\nConstant variables (zero variance, contribute nothing):";
        for (auto w : res.constant_variables) md << ' ' << to_string(w);
        md << '\n';
    }
    write_file(stem.string() + ".pca_variance.csv", var.str());
    write_file(stem.string() + ".pca_loadings.csv", load.str());
    write_file(stem.string() + ".pca_projections.csv", proj.str());
    write_file(stem.string() + ".pca.md", md.str());
}

inline void write_averages_report(const fs::path& stem, const std::vector<WitnessRecord>& recs, const ReportContext& ctx) {
    auto rows = averages(recs);
    std::ostringstream csv, per_state, md;
    csv << "family,n,count,mean,sd,q1,median,q3\n";
    md << "# Average resourcefulness (mean over the eight witnesses)\n\n" << provenance_line(ctx)
       << "| family | n | count | mean | sd | q1 | median | q3 |\n|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        const auto& s = r.stats;
        csv << to_string(r.family) << ',' << r.n << ',' << s.count << ',' << format_double(s.mean) << ','
            << format_double(s.sd) << ',' << format_double(s.q1) << ',' << format_double(s.median) << ','
            << format_double(s.q3) << '\n';
        md << "| " << to_string(r.family) << " | " << r.n << " | " << s.count << " | " << fmt_fixed(s.mean, 4) << " | "
           << fmt_fixed(s.sd, 4) << " | " << fmt_fixed(s.q1, 4) << " | " << fmt_fixed(s.median, 4) << " | "
           << fmt_fixed(s.q3, 4) << " |\n";
    }
    per_state << "family,n,state_id,mean_witness\n";
    for (const auto& r : recs)
        per_state << to_string(r.family) << ',' << r.n << ',' << r.state_id << ',' << format_double(witness_mean(r.values))
                  << '\n';
    write_file(stem.string() + ".averages.csv", csv.str());
    write_file(stem.string() + ".averages_states.csv", per_state.str());
    write_file(stem.string() + ".averages.md", md.str());
}

inline void write_report_meta(const fs::path& stem, const std::string& which, const ReportContext& ctx, const json& opts) {
    json j;
    j["analysis"] = which;
    j["input"] = ctx.input_name;
    j["input_hash"] = ctx.input_hash;
    j["options"] = opts;
    write_file(stem.string() + "." + which + ".meta.json", j.dump(2) + "\n");
}

struct AnalyzeOptions {
    bool pca_standardize = true;
    double tie_eps = 1e-9;
};

inline std::vector<WitnessRecord> load_dataset(const fs::path& p, std::string* bytes_out = nullptr) {
    std::string bytes = read_file(p);
    std::istringstream is(bytes);
    std::vector<WitnessRecord> recs;
    try {
        recs = read_csv(is);
    } catch (const SchemaError& e) {
        throw ValidationError(p.string() + ": " + e.what());
    }
    if (bytes_out) *bytes_out = std::move(bytes);
    return recs;
}

// Writes <out_dir>/<dataset stem>.<which>.* and returns the stem used.
inline fs::path cmd_analyze(const fs::path& dataset, const std::string& which, const fs::path& out_dir,
                            const AnalyzeOptions& opt = {}) {
    std::string bytes;
    auto recs = load_dataset(dataset, &bytes);
    if (recs.empty()) throw ValidationError(dataset.string() + ": no rows");
    ReportContext ctx{dataset.filename().string(), git_blob_hash(bytes)};
    fs::path stem = out_dir / dataset.stem();
    try {
        if (which == "correlations") {
            write_correlation_report(stem, correlations(recs), ctx);
            write_report_meta(stem, which, ctx, json::object());
        } else if (which == "pairwise") {
            write_pairwise_report(stem, pairwise_table(recs, opt.tie_eps), ctx);
            write_report_meta(stem, which, ctx, {{"tie_eps", opt.tie_eps}});
        } else if (which == "pca") {
            write_pca_report(stem, pca(recs, {WitnessId::imag}, opt.pca_standardize), recs, ctx);
            write_report_meta(stem, which, ctx, {{"standardize", opt.pca_standardize}, {"exclude", {"imag"}}});
        } else if (which == "averages") {
            write_averages_report(stem, recs, ctx);
            write_report_meta(stem, which, ctx, json::object());
        } else {
            throw ValidationError("analyze: unknown analysis '" + which + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("analyze: ") + e.what());
    }
    return stem;
}

struct GenerateSummary {
    fs::path csv, manifest;
    std::string content_hash;
    std::size_t rows = 0;
};

inline std::vector<GenerateSummary> cmd_generate(const RunConfig& cfg, std::ostream* log = nullptr) {
    cfg.validate();
    std::vector<GenerateSummary> out;
    fs::path dir(cfg.outputs);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    for (int n : cfg.n_list) {
        GenerateOptions go;
        go.families = cfg.families;
        go.threads = cfg.threads;
        go.sn_depth = cfg.sn_depth;
        auto ds = generate_dataset(n, cfg.per_family, cfg.seed, go, cfg.persist_states);
        std::string csv = to_csv(ds.records);
        GenerateSummary s;
        s.csv = dir / (dataset_stem(n) + ".csv");
        s.manifest = dir / (dataset_stem(n) + ".manifest.json");
        s.content_hash = git_blob_hash(csv);
        s.rows = ds.records.size();
        write_file(s.csv, csv);

        json m;
        m["tool"] = "qrtx";
        m["format_version"] = 1;
        m["config"] = to_json(cfg);
        m["n"] = n;
        m["dataset"] = s.csv.filename().string();
        m["content_hash"] = s.content_hash;
        m["rows"] = s.rows;
        json counts = json::object();
        for (auto f : kAllFamilies) {
            std::size_t c = 0;
            for (const auto& r : ds.records) c += r.family == f;
            if (c) counts[to_string(f)] = c;
        }
        m["family_counts"] = counts;
        if (cfg.persist_states) {
            std::ostringstream st;
            if (cfg.state_format == "bin") write_states_binary(st, ds.records, ds.states);
            else write_states_csv(st, ds.records, ds.states);
            fs::path sp = dir / (dataset_stem(n) + ".states." + cfg.state_format);
            write_file(sp, st.str());
            m["states"] = sp.filename().string();
            m["states_hash"] = git_blob_hash(st.str());
        }
        write_file(s.manifest, m.dump(2) + "\n");
        if (log) *log << "wrote " << s.csv.string() << " (" << s.rows << " rows, " << s.content_hash << ")\n";

        AnalyzeOptions ao{cfg.pca_standardize, cfg.tie_eps};
        const auto& a = cfg.analyses;
        if (a.correlations) cmd_analyze(s.csv, "correlations", dir, ao);
        if (a.pairwise) cmd_analyze(s.csv, "pairwise", dir, ao);
        if (a.pca) cmd_analyze(s.csv, "pca", dir, ao);
        if (a.averages) cmd_analyze(s.csv, "averages", dir, ao);
        out.push_back(s);
    }
    return out;
}

// ---- oracle tables and Monte-Carlo checks ----

struct OracleCell {
    FamilyId family;
    WitnessId witness;
    int n;
    Rational exact;
};

inline std::vector<OracleCell> oracle_cells(const std::string& target, int n_lo, int n_hi) {
    std::vector<OracleCell> cells;
    auto add = [&](FamilyId f, WitnessId w, int n) { cells.push_back({f, w, n, exact_expected_value(f, w, n)}); };
    for (int n = n_lo; n <= n_hi; ++n) {
        if (target == "table1") {
            for (auto f : {FamilyId::haar, FamilyId::imag, FamilyId::real})
                for (auto w : kAllWitnesses) add(f, w, n);
        } else if (target == "props") {
            for (auto w : {WitnessId::ferm, WitnessId::imag, WitnessId::real, WitnessId::stab, WitnessId::sn, WitnessId::uent})
                add(FamilyId::ent, w, n);
            for (auto w : {WitnessId::ent, WitnessId::imag, WitnessId::real, WitnessId::uent, WitnessId::ferm})
                add(FamilyId::ferm, w, n);
            for (auto w : {WitnessId::ferm, WitnessId::ent, WitnessId::uent, WitnessId::sn}) add(FamilyId::uent, w, n);
        } else {
            throw ValidationError("oracle: unknown target '" + target + "' (table1 | props)");
        }
    }
    return cells;
}

inline std::string oracle_csv(const std::vector<OracleCell>& cells) {
    std::ostringstream os;
    os << "family,witness,n,exact,value\n";
    for (const auto& c : cells)
        os << to_string(c.family) << ',' << to_string(c.witness) << ',' << c.n << ',' << to_string(c.exact) << ','
           << format_double(c.exact.convert_to<double>()) << '\n';
    return os.str();
}

inline std::string oracle_markdown(const std::vector<OracleCell>& cells) {
    std::ostringstream os;
    os << "| family | witness | n | exact | value |\n|---|---|---|---|---|\n";
    for (const auto& c : cells)
        os << "| " << to_string(c.family) << " | " << to_string(c.witness) << " | " << c.n << " | "
           << to_string(c.exact) << " | " << fmt_fixed(c.exact.convert_to<double>(), 6) << " |\n";
    return os.str();
}

struct McCheck {
    OracleCell cell;
    double mean = 0, se = 0, z = 0;
    std::size_t samples = 0;
    bool pass = false;
};

// Sample mean within 4 standard errors; a family constant on the witness must hit it to 1e-8.
inline McCheck mc_verdict(const OracleCell& c, const std::vector<double>& xs) {
    McCheck m;
    m.cell = c;
    m.samples = xs.size();
    auto s = summarize(xs);
    m.mean = s.mean;
    m.se = s.sd / std::sqrt(static_cast<double>(xs.size()));
    double expv = c.exact.convert_to<double>();
    double diff = std::abs(m.mean - expv);
    m.z = m.se > 0 ? diff / m.se : (diff > 1e-8 ? INFINITY : 0.0);
    m.pass = m.se > 1e-12 ? diff <= 4.0 * m.se : diff <= 1e-8;
    return m;
}

inline std::vector<McCheck> oracle_check(const std::vector<OracleCell>& cells, int per_family, std::uint64_t seed,
                                         int threads) {
    std::map<std::pair<FamilyId, int>, std::vector<WitnessRecord>> data;
    for (const auto& c : cells) {
        auto key = std::make_pair(c.family, c.n);
        if (data.count(key)) continue;
        GenerateOptions go;
        go.families = {c.family};
        go.threads = threads;
        data[key] = generate_dataset(c.n, per_family, seed, go).records;
    }
    std::vector<McCheck> out;
    for (const auto& c : cells) out.push_back(mc_verdict(c, column(data[{c.family, c.n}], c.witness)));
    return out;
}

}  // namespace qrtx
