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

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "qrtx/common.hpp"
#include "qrtx/tensor.hpp"

namespace qrtx {

// i^phase_pow * X^x * Z^z on n qubits.
//
// Qubit j (1-based, leftmost in a label) lives at bit (n - j) of the masks, the
// same bit it occupies in a computational basis index. So "XI" at n=2 has
// x_bits = 0b10, and dense matrices agree with left-to-right Kronecker order.
struct PauliString {
    int n = 0;
    std::uint64_t x_bits = 0;
    std::uint64_t z_bits = 0;
    int phase_pow = 0;

    int y_count() const { return popcount(x_bits & z_bits); }
    bool is_hermitian() const { return ((phase_pow - y_count()) & 1) == 0; }
    bool is_symmetric() const { return (y_count() & 1) == 0; }
    bool is_identity() const { return x_bits == 0 && z_bits == 0; }
    std::uint64_t qubit_bit(int j) const { return std::uint64_t{1} << (n - j); }

    bool same_operator_up_to_phase(const PauliString& o) const {
        return n == o.n && x_bits == o.x_bits && z_bits == o.z_bits;
    }
    bool operator==(const PauliString& o) const {
        return same_operator_up_to_phase(o) && ((phase_pow - o.phase_pow) & 3) == 0;
    }

    // Hermitian representative with the plain letter product, e.g. "XY" and not "-XY".
    static PauliString canonical(int n, std::uint64_t x, std::uint64_t z) {
        return PauliString{n, x, z, popcount(x & z) & 3};
    }

    // Accepts I, X, Y, Z, '_' and the UTF-8 double-struck one, with an optional
    // "+", "-", "+i", "-i", "i" prefix relative to the letter product.
    static PauliString parse(std::string_view s) {
        int coeff = 0;
        if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
            if (s[0] == '-') coeff = 2;
            s.remove_prefix(1);
        }
        if (!s.empty() && s[0] == 'i') {
            coeff += 1;
            s.remove_prefix(1);
        }
        std::vector<char> letters;
        static constexpr std::string_view kOne = "\xF0\x9D\x9F\x99";
        while (!s.empty()) {
            if (s.substr(0, kOne.size()) == kOne) {
                letters.push_back('I');
                s.remove_prefix(kOne.size());
                continue;
            }
            char c = s[0];
            if (c == '_') c = 'I';
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
                throw std::invalid_argument("PauliString::parse: bad character");
            letters.push_back(c);
            s.remove_prefix(1);
        }
        PauliString p;
        p.n = static_cast<int>(letters.size());
        if (p.n < 1 || p.n > 32) throw std::invalid_argument("PauliString::parse: bad length");
        for (int j = 1; j <= p.n; ++j) {
            char c = letters[static_cast<std::size_t>(j - 1)];
            if (c == 'X' || c == 'Y') p.x_bits |= p.qubit_bit(j);
            if (c == 'Z' || c == 'Y') p.z_bits |= p.qubit_bit(j);
        }
        // letters = (-i)^0 ... each Y = i X Z, so X^x Z^z = (-i)^y letters.
        p.phase_pow = (coeff + p.y_count()) & 3;
        return p;
    }

    // Stable debug rendering: coefficient relative to the letter product, then
    // the letters with the identity drawn as U+1D7D9.
    std::string str() const {
        static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
        std::string out = kPrefix[(phase_pow - y_count()) & 3];
        for (int j = 1; j <= n; ++j) {
            bool x = x_bits & qubit_bit(j), z = z_bits & qubit_bit(j);
            if (x && z) out += 'Y';
            else if (x) out += 'X';
            else if (z) out += 'Z';
            else out += "\xF0\x9D\x9F\x99";
        }
        return out;
    }
};

inline cplx i_pow(int p) {
    static constexpr std::array<double, 4> re = {1, 0, -1, 0}, im = {0, 1, 0, -1};
    p &= 3;
    return {re[static_cast<std::size_t>(p)], im[static_cast<std::size_t>(p)]};
}

inline PauliString operator*(const PauliString& a, const PauliString& b) {
    if (a.n != b.n) throw DimensionError("Pauli product: size mismatch");
    // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
    int ph = a.phase_pow + b.phase_pow + 2 * popcount(a.z_bits & b.x_bits);
    return PauliString{a.n, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, ph & 3};
}

inline bool commutes(const PauliString& a, const PauliString& b) {
    return ((popcount(a.x_bits & b.z_bits) + popcount(a.z_bits & b.x_bits)) & 1) == 0;
}

// P^T = (-1)^{y_count} P, since X and Z are symmetric and Z^z X^x picks up (-1)^{|x&z|}.
inline PauliString transpose(const PauliString& p) {
    PauliString t = p;
    t.phase_pow = (p.phase_pow + 2 * p.y_count()) & 3;
    return t;
}

inline PauliString scaled_by_i(PauliString p, int k = 1) {
    p.phase_pow = (p.phase_pow + k) & 3;
    return p;
}

inline CMatrix to_dense(const PauliString& p) {
    const std::uint64_t d = dim_of(p.n);
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    cplx ph = i_pow(p.phase_pow);
    for (std::uint64_t b = 0; b < d; ++b) {
        double s = (popcount(p.z_bits & b) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(b ^ p.x_bits), static_cast<Eigen::Index>(b)) = ph * s;
    }
    return m;
}

// P|psi>, as a raw amplitude vector.
inline void apply_pauli(const PauliString& p, const cplx* in, cplx* out, std::uint64_t d) {
    cplx ph = i_pow(p.phase_pow);
    for (std::uint64_t b = 0; b < d; ++b) {
        double s = (popcount(p.z_bits & b) & 1) ? -1.0 : 1.0;
        out[b ^ p.x_bits] = ph * s * in[b];
    }
}

inline double pauli_expectation(const StateVector& psi, const PauliString& p) {
    if (psi.n_qubits() != p.n) throw DimensionError("pauli_expectation: size mismatch");
    if (!p.is_hermitian()) throw ContractError("pauli_expectation: operator not Hermitian");
    const std::uint64_t d = psi.dim();
    const cplx* a = psi.data();
    cplx acc = 0.0;
    for (std::uint64_t b = 0; b < d; ++b) {
        cplx t = std::conj(a[b ^ p.x_bits]) * a[b];
        if (popcount(p.z_bits & b) & 1) acc -= t;
        else acc += t;
    }
    acc *= i_pow(p.phase_pow);
    if (std::abs(acc.imag()) > tol::imag_residue)
        throw std::logic_error("pauli_expectation: imaginary residue above tolerance");
    return acc.real();
}

// gamma_{2j-1} = Z^{j-1} X, gamma_{2j} = Z^{j-1} Y.
inline PauliString majorana(int n, int i) {
    if (n < 1 || n > 32) throw DimensionError("majorana: n out of range");
    if (i < 1 || i > 2 * n) throw std::out_of_range("majorana: index out of range");
    int j = (i + 1) / 2;
    PauliString p{n, 0, 0, 0};
    for (int k = 1; k < j; ++k) p.z_bits |= p.qubit_bit(k);
    p.x_bits |= p.qubit_bit(j);
    if (i % 2 == 0) {
        p.z_bits |= p.qubit_bit(j);
        p.phase_pow = 1;
    }
    return p;
}

// Number of Majoranas in the (unique, up to phase) Majorana monomial equal to P.
inline int majorana_degree(const PauliString& p) {
    int parity = 0, degree = 0;
    for (int j = p.n; j >= 1; --j) {
        bool x = p.x_bits & p.qubit_bit(j), z = p.z_bits & p.qubit_bit(j);
        // With Z^parity stripped, the local operator is one of I, X, Y, XY=iZ.
        if (parity) z = !z;
        int a, b;  // gamma_{2j-1}^a gamma_{2j}^b
        if (!x && !z) a = 0, b = 0;
        else if (x && !z) a = 1, b = 0;
        else if (x && z) a = 0, b = 1;
        else a = 1, b = 1;
        degree += a + b;
        parity ^= (a + b) & 1;
    }
    return degree;
}

struct WeightedPauliSum {
    std::vector<std::pair<double, PauliString>> terms;

    double trace_of_square() const {
        if (terms.empty()) return 0.0;
        double s = 0;
        for (auto& [c, p] : terms) s += c * c;
        return s * static_cast<double>(dim_of(terms.front().second.n));
    }
    double expectation(const StateVector& psi) const {
        double s = 0;
        for (auto& [c, p] : terms) s += c * pauli_expectation(psi, p);
        return s;
    }
    CMatrix to_dense() const {
        if (terms.empty()) throw std::logic_error("WeightedPauliSum: empty");
        CMatrix m = qrtx::to_dense(terms.front().second) * terms.front().first;
        for (std::size_t k = 1; k < terms.size(); ++k) m += qrtx::to_dense(terms[k].second) * terms[k].first;
        return m;
    }
};

enum class WitnessId { ent, ferm, imag, real, coh, stab, sn, uent };

inline constexpr std::array<WitnessId, 8> kAllWitnesses = {
    WitnessId::ent, WitnessId::ferm, WitnessId::imag, WitnessId::real,
    WitnessId::coh, WitnessId::stab, WitnessId::sn,   WitnessId::uent};

inline const char* to_string(WitnessId w) {
    static constexpr const char* names[] = {"ent", "ferm", "imag", "real", "coh", "stab", "sn", "uent"};
    return names[static_cast<int>(w)];
}

inline WitnessId parse_witness(std::string_view s) {
    for (auto w : kAllWitnesses)
        if (s == to_string(w)) return w;
    throw std::invalid_argument("unknown witness id: " + std::string(s));
}

inline std::uint64_t tetrahedral(std::uint64_t m) { return m * (m + 1) * (m + 2) / 6; }

// All 4^n strings in lexicographic label order with I < X < Y < Z on qubit 1 first.
inline std::vector<PauliString> all_paulis(int n) {
    std::vector<PauliString> out;
    const std::uint64_t total = std::uint64_t{1} << (2 * n);
    out.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t x = 0, z = 0;
        for (int j = 1; j <= n; ++j) {
            int letter = static_cast<int>((code >> (2 * (n - j))) & 3);
            std::uint64_t bit = std::uint64_t{1} << (n - j);
            if (letter == 1 || letter == 2) x |= bit;
            if (letter == 2 || letter == 3) z |= bit;
        }
        out.push_back(PauliString::canonical(n, x, z));
    }
    return out;
}

// Orbit of strings under qubit permutations, labelled by letter counts.
struct SnOrbit {
    int nx, ny, nz;
    double coeff;  // sqrt(nx! ny! nz! (n-q)! / n!)
    std::vector<PauliString> strings;
};

namespace detail {
inline std::vector<SnOrbit> build_sn_orbits(int n) {
    std::map<std::array<int, 3>, std::vector<PauliString>> buckets;
    for (const auto& p : all_paulis(n)) {
        if (p.is_identity()) continue;
        int nx = popcount(p.x_bits & ~p.z_bits), ny = p.y_count(), nz = popcount(p.z_bits & ~p.x_bits);
        buckets[{nx, ny, nz}].push_back(p);
    }
    std::vector<SnOrbit> out;
    for (auto& [key, strings] : buckets) {
        int q = key[0] + key[1] + key[2];
        double w = std::tgamma(key[0] + 1.0) * std::tgamma(key[1] + 1.0) * std::tgamma(key[2] + 1.0) *
                   std::tgamma(n - q + 1.0) / std::tgamma(n + 1.0);
        out.push_back(SnOrbit{key[0], key[1], key[2], std::sqrt(w), std::move(strings)});
    }
    return out;
}
}  // namespace detail

// Cached per n; lexicographic over (nx, ny, nz), identity orbit excluded.
inline const std::vector<SnOrbit>& sn_orbits(int n) {
    if (n < 1 || n > kMaxQubits) throw DimensionError("sn_orbits: n out of range");
    static std::mutex mu;
    static std::map<int, std::vector<SnOrbit>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::build_sn_orbits(n)).first;
    return it->second;
}

inline std::vector<WeightedPauliSum> witness_operator_set(WitnessId w, int n) {
    if (n < 1 || n > kMaxQubits) throw DimensionError("witness_operator_set: n out of range");
    std::vector<WeightedPauliSum> out;
    auto single = [&](const PauliString& p) { out.push_back(WeightedPauliSum{{{1.0, p}}}); };
    auto local = [&](int j, char c) {
        PauliString p{n, 0, 0, 0};
        if (c != 'Z') p.x_bits = p.qubit_bit(j);
        if (c != 'X') p.z_bits = p.qubit_bit(j);
        p.phase_pow = p.y_count();
        return p;
    };
    switch (w) {
        case WitnessId::ent:
            for (int j = 1; j <= n; ++j)
                for (char c : {'X', 'Y', 'Z'}) single(local(j, c));
            break;
        case WitnessId::ferm:
            for (int a = 1; a <= 2 * n; ++a)
                for (int b = a + 1; b <= 2 * n; ++b) single(scaled_by_i(majorana(n, a) * majorana(n, b)));
            break;
        case WitnessId::imag:
        case WitnessId::real:
        case WitnessId::stab:
            for (const auto& p : all_paulis(n)) {
                if (p.is_identity()) continue;
                if (w == WitnessId::imag && !p.is_symmetric()) continue;
                if (w == WitnessId::real && p.is_symmetric()) continue;
                single(p);
            }
            break;
        case WitnessId::sn:
            for (const auto& orb : sn_orbits(n)) {
                WeightedPauliSum s;
                for (const auto& p : orb.strings) s.terms.emplace_back(orb.coeff, p);
                out.push_back(std::move(s));
            }
            break;
        case WitnessId::uent:
            for (char c : {'X', 'Y', 'Z'}) {
                WeightedPauliSum s;
                for (int j = 1; j <= n; ++j) s.terms.emplace_back(1.0, local(j, c));
                out.push_back(std::move(s));
            }
            break;
        case WitnessId::coh:
            throw std::invalid_argument("witness_operator_set: coh is built from spin operators, not Paulis");
    }
    return out;
}

struct SpinOperators {
    int two_s = 0;  // 2s, so half-integer spins stay exact
    int d = 0;
    CMatrix sx, sy, sz;
    double s() const { return 0.5 * two_s; }
};

// Basis index k <-> m = s - k, so |s,s> is e_0.
inline SpinOperators spin_operators(int two_s) {
    if (two_s < 0) throw std::invalid_argument("spin_operators: negative spin");
    if (two_s + 1 > 256) throw DimensionError("spin_operators: 2s+1 exceeds 256");
    SpinOperators op;
    op.two_s = two_s;
    op.d = two_s + 1;
    const double s = op.s();
    op.sx = CMatrix::Zero(op.d, op.d);
    op.sy = CMatrix::Zero(op.d, op.d);
    op.sz = CMatrix::Zero(op.d, op.d);
    for (int k = 0; k < op.d; ++k) op.sz(k, k) = s - k;
    for (int k = 1; k < op.d; ++k) {
        // <m+1| S_+ |m> with m = s - k
        double m = s - k;
        double amp = std::sqrt(s * (s + 1) - m * (m + 1));
        op.sx(k - 1, k) = op.sx(k, k - 1) = 0.5 * amp;
        op.sy(k - 1, k) = cplx(0.0, -0.5 * amp);
        op.sy(k, k - 1) = cplx(0.0, 0.5 * amp);
    }
    return op;
}

}  // namespace qrtx
