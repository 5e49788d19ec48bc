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

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qrtx/parallel.hpp"
#include "qrtx/samplers.hpp"
#include "qrtx/witness.hpp"

namespace qrtx {

struct WitnessRecord {
    FamilyId family = FamilyId::haar;
    int n = 0;
    int state_id = 0;
    std::uint64_t seed = 0;  // key of the RngStream that produced the state
    WitnessVector values;
};

inline constexpr const char* kCsvHeader =
    "family,n,state_id,seed,lambda_ent,lambda_ferm,lambda_imag,lambda_real,lambda_coh,lambda_stab,lambda_sn,lambda_uent";

inline RngStream state_stream(std::uint64_t seed, FamilyId f, int state_id) {
    std::uint64_t stream = (static_cast<std::uint64_t>(f) + 1) << 32 | static_cast<std::uint32_t>(state_id);
    return RngStream(seed, stream);
}

struct GenerateOptions {
    std::vector<FamilyId> families{kAllFamilies.begin(), kAllFamilies.end()};
    int threads = 0;    // 0: hardware concurrency
    int sn_depth = 0;   // 0: n^3
};

struct GeneratedDataset {
    std::vector<WitnessRecord> records;
    std::vector<StateVector> states;  // parallel to records when kept
};

// Records sorted by (family order, state_id); identical for any thread count.
inline GeneratedDataset generate_dataset(int n, int per_family, std::uint64_t seed, const GenerateOptions& opt = {},
                                         bool keep_states = false) {
    if (per_family < 1) throw std::invalid_argument("generate_dataset: per_family must be >= 1");
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("generate_dataset: n must be in 1..8");
    std::vector<FamilyId> fams = opt.families;
    std::sort(fams.begin(), fams.end());
    fams.erase(std::unique(fams.begin(), fams.end()), fams.end());

    const std::size_t total = fams.size() * static_cast<std::size_t>(per_family);
    GeneratedDataset out;
    out.records.resize(total);
    std::vector<StateVector> states(keep_states ? total : 0);
    // Warm the per-n caches once so worker threads only read them.
    detail::cached_operator_set(WitnessId::ferm, n);
    detail::cached_operator_set(WitnessId::sn, n);
    detail::cached_operator_set(WitnessId::uent, n);
    detail::cached_spin(static_cast<int>(dim_of(n)) - 1);
    if (std::find(fams.begin(), fams.end(), FamilyId::sn) != fams.end()) sn_dicke_generators(n);

    parallel_for(total, opt.threads, [&](std::size_t i) {
        FamilyId f = fams[i / static_cast<std::size_t>(per_family)];
        int sid = static_cast<int>(i % static_cast<std::size_t>(per_family));
        RngStream rng = state_stream(seed, f, sid);
        FamilySpec spec{f, n, {}};
        if (opt.sn_depth > 0) spec.params["sn_depth"] = opt.sn_depth;
        StateVector psi = sample_state(spec, rng);
        out.records[i] = WitnessRecord{f, n, sid, rng.key(), witness_vector(psi)};
        if (keep_states) states[i] = std::move(psi);
    });
    out.states = std::move(states);
    return out;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const std::vector<WitnessRecord>& recs) {
    os << kCsvHeader << '\n';
    for (const auto& r : recs) {
        os << to_string(r.family) << ',' << r.n << ',' << r.state_id << ',' << r.seed;
        for (auto w : kAllWitnesses) os << ',' << format_double(r.values[w]);
        os << '\n';
    }
}

inline std::string to_csv(const std::vector<WitnessRecord>& recs) {
    std::ostringstream os;
    write_csv(os, recs);
    return os.str();
}

struct SchemaError : Error {
    using Error::Error;
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double_cell(const std::string& s, const std::string& col, std::size_t line) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw SchemaError("line " + std::to_string(line) + ", column " + col + ": not a number: '" + s + "'");
    return v;
}
}  // namespace detail

inline std::vector<WitnessRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw SchemaError("empty dataset: missing header");
    auto got = detail::split_csv_line(line);
    auto want = detail::split_csv_line(kCsvHeader);
    for (std::size_t k = 0; k < std::max(got.size(), want.size()); ++k) {
        std::string g = k < got.size() ? got[k] : "<missing>";
        std::string w = k < want.size() ? want[k] : "<none>";
        if (g != w)
            throw SchemaError("header column " + std::to_string(k + 1) + ": expected '" + w + "', found '" + g + "'");
    }
    std::vector<WitnessRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != want.size())
            throw SchemaError("line " + std::to_string(lineno) + ": expected " + std::to_string(want.size()) +
                              " columns, found " + std::to_string(cells.size()));
        WitnessRecord r;
        try {
            r.family = parse_family(cells[0]);
        } catch (const std::invalid_argument& e) {
            throw SchemaError("line " + std::to_string(lineno) + ", column family: " + e.what());
        }
        r.n = static_cast<int>(detail::parse_double_cell(cells[1], "n", lineno));
        r.state_id = static_cast<int>(detail::parse_double_cell(cells[2], "state_id", lineno));
        char* end = nullptr;
        r.seed = std::strtoull(cells[3].c_str(), &end, 10);
        if (cells[3].empty() || end != cells[3].c_str() + cells[3].size())
            throw SchemaError("line " + std::to_string(lineno) + ", column seed: not an integer");
        for (std::size_t k = 0; k < kAllWitnesses.size(); ++k)
            r.values.values[k] = detail::parse_double_cell(cells[4 + k], want[4 + k], lineno);
        r.values.n = r.n;
        out.push_back(r);
    }
    return out;
}

// Largest-magnitude amplitude made real-positive (first index on ties).
inline CVector canonical_phase(const CVector& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best]) + 1e-15) best = i;
    if (std::abs(v[best]) == 0.0) return v;
    return v * (std::abs(v[best]) / v[best]);
}

// Binary state dump, little-endian, one record per state:
//   uint8 family index (haar=0 ... uent=8), uint8 n, uint32 state_id,
//   then 2^(n+1) float64 values re0, im0, re1, im1, ...
inline void write_states_binary(std::ostream& os, const std::vector<WitnessRecord>& recs,
                                const std::vector<StateVector>& states) {
    auto put = [&](const void* p, std::size_t k) {
        // every supported target is little-endian; keep the byte order explicit anyway
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < k; ++i) os.put(static_cast<char>(b[i]));
    };
    static_assert(std::endian::native == std::endian::little, "state dump assumes a little-endian host");
    for (std::size_t i = 0; i < recs.size(); ++i) {
        std::uint8_t fam = static_cast<std::uint8_t>(recs[i].family);
        std::uint8_t n = static_cast<std::uint8_t>(recs[i].n);
        std::uint32_t sid = static_cast<std::uint32_t>(recs[i].state_id);
        put(&fam, 1);
        put(&n, 1);
        put(&sid, 4);
        CVector v = canonical_phase(states.at(i).amplitudes());
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            double re = v[k].real(), im = v[k].imag();
            put(&re, 8);
            put(&im, 8);
        }
    }
}

struct StateRecord {
    FamilyId family;
    int n;
    int state_id;
    StateVector state;
};

inline std::vector<StateRecord> read_states_binary(std::istream& is) {
    std::vector<StateRecord> out;
    for (;;) {
        std::uint8_t fam = 0, n = 0;
        std::uint32_t sid = 0;
        if (!is.read(reinterpret_cast<char*>(&fam), 1)) break;
        if (!is.read(reinterpret_cast<char*>(&n), 1) || !is.read(reinterpret_cast<char*>(&sid), 4))
            throw SchemaError("state dump: truncated record header");
        if (fam >= kAllFamilies.size() || n < 1 || n > kMaxQubits) throw SchemaError("state dump: bad record header");
        CVector v(static_cast<Eigen::Index>(dim_of(n)));
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            double re, im;
            if (!is.read(reinterpret_cast<char*>(&re), 8) || !is.read(reinterpret_cast<char*>(&im), 8))
                throw SchemaError("state dump: truncated amplitudes");
            v[k] = cplx(re, im);
        }
        out.push_back({kAllFamilies[fam], n, static_cast<int>(sid), StateVector::normalized(std::move(v), n)});
    }
    return out;
}

// CSV state dump: family,n,state_id,re0,im0,re1,im1,...
inline void write_states_csv(std::ostream& os, const std::vector<WitnessRecord>& recs,
                             const std::vector<StateVector>& states) {
    for (std::size_t i = 0; i < recs.size(); ++i) {
        os << to_string(recs[i].family) << ',' << recs[i].n << ',' << recs[i].state_id;
        CVector v = canonical_phase(states.at(i).amplitudes());
        for (Eigen::Index k = 0; k < v.size(); ++k)
            os << ',' << format_double(v[k].real()) << ',' << format_double(v[k].imag());
        os << '\n';
    }
}

}  // namespace qrtx
