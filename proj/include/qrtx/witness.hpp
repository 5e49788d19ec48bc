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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <vector>

#include "qrtx/pauli.hpp"
#include "qrtx/tensor.hpp"

namespace qrtx {

struct WitnessVector {
    int n = 0;
    std::array<double, 8> values{};

    double& operator[](WitnessId w) { return values[static_cast<std::size_t>(w)]; }
    double operator[](WitnessId w) const { return values[static_cast<std::size_t>(w)]; }
};

namespace detail {

inline double finalize(WitnessId w, double v) {
    if (v < -tol::clamp || v > 1.0 + tol::clamp || !std::isfinite(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "witness " << to_string(w) << " out of range: " << v;
        throw std::logic_error(os.str());
    }
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

inline const std::vector<WeightedPauliSum>& cached_operator_set(WitnessId w, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<std::vector<WeightedPauliSum>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{static_cast<int>(w), n}];
    if (!slot) slot = std::make_unique<std::vector<WeightedPauliSum>>(witness_operator_set(w, n));
    return *slot;
}

inline const SpinOperators& cached_spin(int two_s) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SpinOperators>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[two_s];
    if (!slot) slot = std::make_unique<SpinOperators>(spin_operators(two_s));
    return *slot;
}

inline double normalization(WitnessId w, int n) {
    const double d = static_cast<double>(dim_of(n));
    switch (w) {
        case WitnessId::ent: return 1.0 / n;
        case WitnessId::ferm: return 1.0 / n;
        case WitnessId::imag: return 1.0 / (d - 1.0);
        case WitnessId::real: return 2.0 / d;
        case WitnessId::stab: return 1.0 / (d - 1.0);
        case WitnessId::sn: return 1.0 / (d - 1.0);
        case WitnessId::uent: return 1.0 / (static_cast<double>(n) * n);
        case WitnessId::coh: break;
    }
    throw std::logic_error("normalization: coh depends on the spin");
}

inline double coh_value(const StateVector& psi) {
    const int d = static_cast<int>(psi.dim());
    if (d < 2) throw DimensionError("coh: dimension must be at least 2");
    const SpinOperators& op = cached_spin(d - 1);
    const CVector& a = psi.amplitudes();
    double s = op.s();
    double ex = a.dot(op.sx * a).real();
    double ey = a.dot(op.sy * a).real();
    double ez = a.dot(op.sz * a).real();
    return (ex * ex + ey * ey + ez * ez) / (s * s);
}

inline void require_qubits(const StateVector& psi) {
    if (psi.n_qubits() < 1 || psi.n_qubits() > kMaxQubits)
        throw DimensionError("witness: state must be a 1..8 qubit register");
}

}  // namespace detail

// Brute-force value: C * sum over the operator set of <P>^k.
inline double evaluate(WitnessId w, const StateVector& psi) {
    if (w == WitnessId::coh) return detail::finalize(w, detail::coh_value(psi));
    detail::require_qubits(psi);
    const int n = psi.n_qubits();
    const int power = w == WitnessId::stab ? 4 : 2;
    double acc = 0.0;
    for (const auto& op : detail::cached_operator_set(w, n)) {
        double e = op.expectation(psi);
        acc += power == 4 ? e * e * e * e : e * e;
    }
    return detail::finalize(w, detail::normalization(w, n) * acc);
}

inline bool has_fast_path(WitnessId w) {
    return w == WitnessId::ent || w == WitnessId::real || w == WitnessId::imag;
}

namespace detail {

// (2/n) sum_i (Tr[rho_i^2] - 1/2)
inline double ent_fast(const StateVector& psi) {
    const int n = psi.n_qubits();
    const std::uint64_t d = psi.dim();
    const cplx* a = psi.data();
    double acc = 0.0;
    for (int j = 1; j <= n; ++j) {
        std::uint64_t bit = std::uint64_t{1} << (n - j);
        double r00 = 0, r11 = 0;
        cplx r01 = 0;
        for (std::uint64_t b = 0; b < d; ++b) {
            if (b & bit) continue;
            cplx a0 = a[b], a1 = a[b | bit];
            r00 += std::norm(a0);
            r11 += std::norm(a1);
            r01 += a0 * std::conj(a1);
        }
        acc += r00 * r00 + r11 * r11 + 2.0 * std::norm(r01) - 0.5;
    }
    return 2.0 * acc / n;
}

// 1 - |<psi*|psi>|^2
inline double real_fast(const StateVector& psi) {
    const cplx* a = psi.data();
    cplx ov = 0.0;
    for (std::size_t b = 0; b < psi.dim(); ++b) ov += a[b] * a[b];
    return 1.0 - std::norm(ov);
}

inline double imag_from_real(double real, int n) { return 1.0 + real / (std::ldexp(1.0, 1 - n) - 2.0); }

}  // namespace detail

inline double evaluate_fast(WitnessId w, const StateVector& psi) {
    detail::require_qubits(psi);
    switch (w) {
        case WitnessId::ent: return detail::finalize(w, detail::ent_fast(psi));
        case WitnessId::real: return detail::finalize(w, detail::real_fast(psi));
        case WitnessId::imag:
            return detail::finalize(w, detail::imag_from_real(detail::real_fast(psi), psi.n_qubits()));
        default: break;
    }
    throw UnsupportedError(std::string("evaluate_fast: no fast path for ") + to_string(w));
}

// All 4^n canonical Pauli expectations, index (x << n) | z.
//
// For fixed x the sums over z are a Walsh-Hadamard transform of
// c_b = conj(psi_{b^x}) psi_b, so the whole spectrum costs O(4^n n).
inline std::vector<double> pauli_spectrum(const StateVector& psi) {
    detail::require_qubits(psi);
    const int n = psi.n_qubits();
    const std::uint64_t d = psi.dim();
    const cplx* a = psi.data();
    std::vector<double> out(d * d);
    std::vector<cplx> c(d);
    for (std::uint64_t x = 0; x < d; ++x) {
        for (std::uint64_t b = 0; b < d; ++b) c[b] = std::conj(a[b ^ x]) * a[b];
        for (std::uint64_t h = 1; h < d; h <<= 1)
            for (std::uint64_t i = 0; i < d; i += 2 * h)
                for (std::uint64_t j = i; j < i + h; ++j) {
                    cplx u = c[j], v = c[j + h];
                    c[j] = u + v;
                    c[j + h] = u - v;
                }
        for (std::uint64_t z = 0; z < d; ++z) {
            cplx v = c[z] * i_pow(popcount(x & z));
            out[(x << n) | z] = v.real();
        }
    }
    return out;
}

inline double spectrum_at(const std::vector<double>& spec, const PauliString& p) {
    double v = spec[(p.x_bits << p.n) | p.z_bits];
    // canonical phase is i^y; p may differ from it by a sign
    return ((p.phase_pow - p.y_count()) & 3) == 2 ? -v : v;
}

inline double evaluate_from_spectrum(WitnessId w, const std::vector<double>& spec, int n) {
    const int power = w == WitnessId::stab ? 4 : 2;
    double acc = 0.0;
    if (w == WitnessId::stab) {
        for (std::size_t k = 1; k < spec.size(); ++k) {
            double e2 = spec[k] * spec[k];
            acc += e2 * e2;
        }
    } else {
        for (const auto& op : detail::cached_operator_set(w, n)) {
            double e = 0.0;
            for (const auto& [c, p] : op.terms) e += c * spectrum_at(spec, p);
            acc += power == 4 ? e * e * e * e : e * e;
        }
    }
    return detail::finalize(w, detail::normalization(w, n) * acc);
}

inline WitnessVector witness_vector(const StateVector& psi) {
    detail::require_qubits(psi);
    const int n = psi.n_qubits();
    WitnessVector out;
    out.n = n;
    auto spec = pauli_spectrum(psi);
    out[WitnessId::ent] = evaluate_fast(WitnessId::ent, psi);
    out[WitnessId::ferm] = evaluate_from_spectrum(WitnessId::ferm, spec, n);
    out[WitnessId::real] = evaluate_fast(WitnessId::real, psi);
    out[WitnessId::imag] = evaluate_fast(WitnessId::imag, psi);
    out[WitnessId::coh] = evaluate(WitnessId::coh, psi);
    out[WitnessId::stab] = evaluate_from_spectrum(WitnessId::stab, spec, n);
    out[WitnessId::sn] = evaluate_from_spectrum(WitnessId::sn, spec, n);
    out[WitnessId::uent] = evaluate_from_spectrum(WitnessId::uent, spec, n);
    double resid = out[WitnessId::imag] - out[WitnessId::real] / (std::ldexp(1.0, 1 - n) - 2.0) - 1.0;
    if (std::abs(resid) > 1e-9) throw std::logic_error("witness_vector: real/imag complement violated");
    return out;
}

}  // namespace qrtx
