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

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qrtx/optimize.hpp"
#include "qrtx/pauli.hpp"
#include "qrtx/samplers.hpp"
#include "qrtx/witness.hpp"

namespace qrtx {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct NoClosedForm : Error {
    using Error::Error;
};

namespace oracle {

inline BigInt ipow(long long b, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline BigInt binom(int a, int b) {
    if (b < 0 || b > a) return 0;
    BigInt r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

inline Rational q(const BigInt& num, const BigInt& den = 1) { return Rational(num, den); }

inline long long floor_half(int v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

// Non-identity Sn orbits with an even number of Y letters.
inline BigInt sn_symmetric_count(int n) {
    BigInt a = floor_half(n - 1), b = n / 2;
    BigInt num = 3 * BigInt(n) * (3 + n) + 3 * a * a + 2 * a * a * a + 4 * b + 2 * b * b * b + a * (1 + 6 * b);
    return num / 6;
}

inline BigInt sn_total_count(int n) { return BigInt(tetrahedral(static_cast<std::uint64_t>(n + 1))) - 1; }

// sum over even k >= 2 of C(n,k/2) * (C(2n,k) +- C(n,k/2)) / (2 C(2n,k))
inline Rational ferm_parity_sum(int n, int sign) {
    Rational s = 0;
    for (int k = 2; k <= 2 * n; k += 2) {
        BigInt c = binom(n, k / 2), c2 = binom(2 * n, k);
        s += q(c * (c2 + sign * c), 2 * c2);
    }
    return s;
}

}  // namespace oracle

inline Rational exact_expected_value(FamilyId f, WitnessId w, int n) {
    using namespace oracle;
    if (n < 1) throw std::invalid_argument("expected_value: n must be >= 1");
    const BigInt d = ipow(2, n);
    const BigInt N = n;
    auto none = [&]() -> Rational {
        throw NoClosedForm(std::string("no closed form for family ") + to_string(f) + ", witness " + to_string(w));
    };
    switch (f) {
        case FamilyId::haar:
            switch (w) {
                case WitnessId::ent: return q(3, d + 1);
                case WitnessId::ferm: return q(2 * N - 1, d + 1);
                case WitnessId::imag: return q(d + 2, 2 * (d + 1));
                case WitnessId::real: return q(d - 1, d + 1);
                case WitnessId::coh: return q(1, d - 1);
                case WitnessId::stab: return q(3, d + 3);
                case WitnessId::sn: return q(sn_total_count(n), d * d - 1);
                case WitnessId::uent: return q(3, N * (d + 1));
            }
            break;
        case FamilyId::imag:
            switch (w) {
                case WitnessId::ent: return q(4, d + 2);
                case WitnessId::ferm: return q(2 * N, d + 2);
                case WitnessId::imag: return 1;
                case WitnessId::real: return 0;
                case WitnessId::coh: return q(4 * (d + 1), 3 * (d - 1) * (d + 2));
                case WitnessId::stab: return q(6, 6 + d);
                case WitnessId::sn: return q(2 * sn_symmetric_count(n), (d - 1) * (d + 2));
                case WitnessId::uent: return q(4, N * (d + 2));
            }
            break;
        case FamilyId::real:
            switch (w) {
                case WitnessId::ent: return q(3 * d - 2, (d - 1) * (d + 2));
                case WitnessId::ferm: return q(d * (2 * N - 1) - 2, (d - 1) * (d + 2));
                case WitnessId::imag: return q(d - 2, 2 * (d - 1));
                case WitnessId::real: return 1;
                case WitnessId::coh: return q(3 * d * d + d - 2, 3 * (d - 1) * (d - 1) * (d + 2));
                case WitnessId::stab: return q(3 * (3 * d + d * d - 2), (d - 1) * (d + 1) * (d + 6));
                case WitnessId::sn: {
                    BigInt ns = sn_symmetric_count(n), na = sn_total_count(n) - ns;
                    return q((d - 2) * ns + (d + 2) * na, (d - 1) * (d - 1) * (d + 2));
                }
                case WitnessId::uent: return q(3 * d - 2, N * (d - 1) * (d + 2));
            }
            break;
        case FamilyId::ent: {
            const BigInt t3 = ipow(3, n);
            switch (w) {
                case WitnessId::ent: return 1;
                case WitnessId::ferm: return (Rational(N - 1) + q(1, t3)) / N;
                case WitnessId::imag: return q(ipow(6, n) + ipow(4, n) - 2 * t3, 2 * t3 * (d - 1));
                case WitnessId::real: return 1 - q(ipow(2, n), t3);
                case WitnessId::stab: return q(ipow(8, n) - ipow(5, n), ipow(5, n) * (d - 1));
                case WitnessId::sn: return q(19 * (t3 - 1) - 2 * N * (N + 6), 8 * t3 * (d - 1));
                case WitnessId::uent: return q(1, N);
                case WitnessId::coh: return none();
            }
            break;
        }
        case FamilyId::ferm:
            switch (w) {
                case WitnessId::ferm: return 1;
                case WitnessId::ent: return q(1, 2 * N - 1);
                case WitnessId::imag: return ferm_parity_sum(n, +1) / Rational(d - 1);
                case WitnessId::real: return Rational(2) * ferm_parity_sum(n, -1) / Rational(d);
                case WitnessId::uent: return q(1, N * (2 * N - 1));
                default: return none();
            }
        case FamilyId::uent:
            switch (w) {
                case WitnessId::ent:
                case WitnessId::uent:
                case WitnessId::sn: return 1;
                case WitnessId::ferm: return q(2 * N - 1, 2 * N + 1);
                default: return none();
            }
        default: break;
    }
    return none();
}

inline double expected_value(FamilyId f, WitnessId w, int n) {
    return exact_expected_value(f, w, n).convert_to<double>();
}

inline bool has_closed_form(FamilyId f, WitnessId w, int n) {
    try {
        exact_expected_value(f, w, n);
        return true;
    } catch (const NoClosedForm&) {
        return false;
    }
}

inline std::string to_string(const Rational& r) {
    std::string num = boost::multiprecision::numerator(r).str(), den = boost::multiprecision::denominator(r).str();
    return den == "1" ? num : num + "/" + den;
}

// ---- structural second moments ----

enum class GroupId { unitary, orthogonal, matchgate };
enum class ReferenceId { zero, plus_y };

inline const char* to_string(GroupId g) {
    static constexpr const char* names[] = {"unitary", "orthogonal", "matchgate"};
    return names[static_cast<int>(g)];
}
inline const char* to_string(ReferenceId r) { return r == ReferenceId::zero ? "zero" : "plus_y"; }

inline StateVector reference_state(ReferenceId r, int n) {
    if (r == ReferenceId::zero) return StateVector::basis(n, 0);
    return product_state(std::vector<CVector>(static_cast<std::size_t>(n), bloch_qubit(0.5 * std::numbers::pi,
                                                                                      0.5 * std::numbers::pi)));
}

// Trace data of one witness operator, all that a second moment needs.
struct OperatorTraces {
    double tr = 0.0, tr_sq = 0.0, tr_ptp = 0.0;  // Tr P, Tr P^2, Tr P P^T
};

inline OperatorTraces traces_of(const WeightedPauliSum& op) {
    OperatorTraces t;
    const double d = static_cast<double>(dim_of(op.terms.front().second.n));
    for (const auto& [c, p] : op.terms) {
        if (p.is_identity()) t.tr += c * std::real(i_pow(p.phase_pow)) * d;
        t.tr_sq += c * c * d;
        t.tr_ptp += (p.is_symmetric() ? 1.0 : -1.0) * c * c * d;
    }
    return t;
}

inline OperatorTraces traces_of(const CMatrix& m) {
    OperatorTraces t;
    t.tr = m.trace().real();
    t.tr_sq = (m * m).trace().real();
    t.tr_ptp = (m * m.transpose()).trace().real();
    return t;
}

// E[Lambda_w] over G|ref>, computed from the second-moment twirl:
//   unitary:    E[rho x rho] = (I + SWAP) / (d(d+1))
//   orthogonal: E[rho x rho] = c1 (I + SWAP) + c2 Pi, with t = |<ref*|ref>|^2,
//               c1 = (d - t)/(d(d-1)(d+2)), c2 = (t(d+1) - 2)/(d(d-1)(d+2))
//   matchgate:  E[<P>^2] = C(n,k/2)/C(2n,k) for P a product of k Majoranas.
inline double second_moment_expectation(GroupId g, ReferenceId ref, WitnessId w, int n) {
    if (w == WitnessId::stab) throw UnsupportedError("unsupported: fourth-moment machinery out of scope");
    if (n < 1 || n > kMaxQubits) throw DimensionError("second_moment_expectation: n out of range");
    const double d = static_cast<double>(dim_of(n));

    if (g == GroupId::matchgate) {
        if (ref != ReferenceId::zero) throw UnsupportedError("matchgate orbit is defined from |0...0>");
        if (w == WitnessId::coh || w == WitnessId::sn)
            throw UnsupportedError(std::string("matchgate second moment not implemented for ") + to_string(w));
        if (w == WitnessId::uent && n < 3)
            throw UnsupportedError("matchgate uent needs n >= 3 (parity cross terms)");
        double acc = 0.0;
        for (const auto& op : detail::cached_operator_set(w, n))
            for (const auto& [c, p] : op.terms) {
                int k = majorana_degree(p);
                if (k % 2) continue;
                acc += c * c * (oracle::binom(n, k / 2).convert_to<double>() / oracle::binom(2 * n, k).convert_to<double>());
            }
        return detail::normalization(w, n) * acc;
    }

    std::vector<OperatorTraces> traces;
    double norm;
    if (w == WitnessId::coh) {
        const auto& sp = detail::cached_spin(static_cast<int>(d) - 1);
        for (const CMatrix* m : {&sp.sx, &sp.sy, &sp.sz}) traces.push_back(traces_of(*m));
        norm = 1.0 / (sp.s() * sp.s());
    } else {
        for (const auto& op : detail::cached_operator_set(w, n)) traces.push_back(traces_of(op));
        norm = detail::normalization(w, n);
    }

    double acc = 0.0;
    if (g == GroupId::unitary) {
        for (const auto& t : traces) acc += (t.tr * t.tr + t.tr_sq) / (d * (d + 1));
    } else {
        StateVector r = reference_state(ref, n);
        cplx ov = 0;
        for (std::size_t b = 0; b < r.dim(); ++b) ov += r[b] * r[b];
        double tt = std::norm(ov);
        double den = d * (d - 1) * (d + 2);
        double c1 = (d - tt) / den, c2 = (tt * (d + 1) - 2) / den;
        for (const auto& t : traces) acc += c1 * (t.tr * t.tr + t.tr_sq) + c2 * t.tr_ptp;
    }
    return norm * acc;
}

// ---- uniform product states (R_z(alpha) R_y(beta) |0>)^{x n} ----

enum class AngleConvention {
    rotation_half_angle,  // R(t) = exp(-i t sigma/2); (alpha, beta) are Bloch angles
    as_printed,           // the closed forms exactly as typeset in the source
};

inline const char* to_string(AngleConvention c) {
    return c == AngleConvention::rotation_half_angle ? "rotation_half_angle" : "as_printed";
}

inline double uniform_product_witness(WitnessId w, double alpha, double beta, int n,
                                      AngleConvention conv = AngleConvention::rotation_half_angle) {
    if (n < 1) throw std::invalid_argument("uniform_product_witness: n must be >= 1");
    const double d = std::ldexp(1.0, n);
    if (w == WitnessId::ferm) {
        double c = conv == AngleConvention::as_printed ? std::cos(2 * beta) : std::cos(beta);
        return (n - 1 + std::pow(c, 2 * n)) / n;
    }
    if (w == WitnessId::stab) {
        double a = conv == AngleConvention::as_printed ? alpha : 2 * alpha;
        double b = conv == AngleConvention::as_printed ? beta / 2 : beta;
        double c4 = std::pow(std::cos(b), 4), s4 = std::pow(std::sin(b), 4);
        double single = 1 + c4 + 0.25 * (3 + std::cos(2 * a)) * s4;
        return (std::pow(single, n) - 1) / (d - 1);
    }
    throw std::invalid_argument("uniform_product_witness: only ferm and stab are supported");
}

inline StateVector uniform_product_state(double alpha, double beta, int n) {
    return product_state(std::vector<CVector>(static_cast<std::size_t>(n), bloch_qubit(alpha, beta)));
}

// Grid comparison against direct evaluation; returns the convention that
// matches to 1e-10 at n = 2 and 3, or nothing if neither does.
inline std::optional<AngleConvention> resolve_angle_convention(WitnessId w, int grid = 12) {
    for (auto conv : {AngleConvention::rotation_half_angle, AngleConvention::as_printed}) {
        bool ok = true;
        for (int n = 2; n <= 3 && ok; ++n)
            for (int i = 0; i < grid && ok; ++i)
                for (int j = 0; j < grid && ok; ++j) {
                    double alpha = 2 * std::numbers::pi * (i + 0.37) / grid;
                    double beta = std::numbers::pi * (j + 0.21) / grid;
                    double direct = evaluate(w, uniform_product_state(alpha, beta, n));
                    ok = std::abs(direct - uniform_product_witness(w, alpha, beta, n, conv)) < 1e-10;
                }
        if (ok) return conv;
    }
    return std::nullopt;
}

struct MagicOptimum {
    double alpha, beta, value;
};

// Minimum of Lambda_stab over single-qubit states (most magic product state).
inline MagicOptimum minimize_stab_uniform(int n = 1, int starts = 24, std::uint64_t seed = 5) {
    auto f = [&](const std::vector<double>& x) { return uniform_product_witness(WitnessId::stab, x[0], x[1], n); };
    auto r = multistart_minimize(f, 2, 0.0, std::numbers::pi, starts, seed);
    return {r.x[0], r.x[1], r.value};
}

// Minimum of Lambda_ferm over product states prod_j R_y(beta_j)|0>.
inline MinimizeResult minimize_ferm_product(int n, int starts = 16, std::uint64_t seed = 11) {
    auto f = [&](const std::vector<double>& betas) {
        std::vector<CVector> qs;
        for (double b : betas) qs.push_back(bloch_qubit(0.0, b));
        return evaluate(WitnessId::ferm, product_state(qs));
    };
    return multistart_minimize(f, static_cast<std::size_t>(n), 0.0, std::numbers::pi, starts, seed);
}

}  // namespace qrtx
