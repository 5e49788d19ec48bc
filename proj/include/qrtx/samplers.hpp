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
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qrtx/clifford.hpp"
#include "qrtx/pauli.hpp"
#include "qrtx/rng.hpp"
#include "qrtx/tensor.hpp"

namespace qrtx {

enum class FamilyId { haar, ent, ferm, imag, real, coh, stab, sn, uent };

inline constexpr std::array<FamilyId, 9> kAllFamilies = {
    FamilyId::haar, FamilyId::ent,  FamilyId::ferm, FamilyId::imag, FamilyId::real,
    FamilyId::coh,  FamilyId::stab, FamilyId::sn,   FamilyId::uent};

inline const char* to_string(FamilyId f) {
    static constexpr const char* names[] = {"haar", "ent", "ferm", "imag", "real", "coh", "stab", "sn", "uent"};
    return names[static_cast<int>(f)];
}

inline FamilyId parse_family(std::string_view s) {
    for (auto f : kAllFamilies)
        if (s == to_string(f)) return f;
    throw std::invalid_argument("unknown family id: " + std::string(s));
}

struct FamilySpec {
    FamilyId family = FamilyId::haar;
    int n = 1;
    std::map<std::string, int> params;  // sn_depth

    void validate() const {
        if (n < 1 || n > kMaxQubits) throw std::invalid_argument("FamilySpec: n must be in 1..8");
        for (auto& [k, v] : params) {
            if (k != "sn_depth") throw std::invalid_argument("FamilySpec: unknown parameter " + k);
            if (v < 1) throw std::invalid_argument("FamilySpec: sn_depth must be positive");
        }
    }
    int sn_depth() const {
        auto it = params.find("sn_depth");
        return it == params.end() ? n * n * n : it->second;
    }
};

// Standard complex Gaussian matrix, drawn column by column, real part first.
inline CMatrix ginibre(int d, RngStream& rng) {
    CMatrix g(d, d);
    const double s = std::sqrt(0.5);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            double re = rng.normal(), im = rng.normal();
            g(r, c) = cplx(s * re, s * im);
        }
    return g;
}

inline RMatrix real_ginibre(int d, RngStream& rng) {
    RMatrix g(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) g(r, c) = rng.normal();
    return g;
}

// Q R = G, then Q diag(R_ii / |R_ii|) is Haar distributed.
inline CMatrix haar_unitary(int d, RngStream& rng) {
    if (d < 1 || d > 256) throw DimensionError("haar_unitary: d out of range");
    CMatrix g = ginibre(d, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix& r = qr.matrixQR();
    for (int j = 0; j < d; ++j) {
        cplx rjj = r(j, j);
        q.col(j) *= std::abs(rjj) > 0 ? rjj / std::abs(rjj) : cplx(1.0);
    }
    return q;
}

// haar_unitary(d) e_0 without the factorization: the first Q column of a
// phase-fixed QR is the normalized first Gaussian column.
inline CVector haar_unitary_first_column(int d, RngStream& rng) {
    if (d < 1 || d > 256) throw DimensionError("haar_unitary: d out of range");
    CMatrix g = ginibre(d, rng);
    return g.col(0) / g.col(0).norm();
}

inline RMatrix haar_orthogonal(int d, RngStream& rng, bool special = false) {
    if (d < 1 || d > 256) throw DimensionError("haar_orthogonal: d out of range");
    RMatrix g = real_ginibre(d, rng);
    Eigen::HouseholderQR<RMatrix> qr(g);
    RMatrix q = qr.householderQ();
    const RMatrix& r = qr.matrixQR();
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    if (special && q.determinant() < 0) q.row(0) *= -1.0;
    return q;
}

inline RVector haar_orthogonal_first_column(int d, RngStream& rng) {
    if (d < 1 || d > 256) throw DimensionError("haar_orthogonal: d out of range");
    RMatrix g = real_ginibre(d, rng);
    return g.col(0) / g.col(0).norm();
}

// R_z(alpha) R_y(beta) |0> with R(t) = exp(-i t sigma / 2).
inline CVector bloch_qubit(double alpha, double beta) {
    CVector v(2);
    v[0] = std::polar(std::cos(0.5 * beta), -0.5 * alpha);
    v[1] = std::polar(std::sin(0.5 * beta), 0.5 * alpha);
    return v;
}

// Euler angles for Haar SU(2) acting on |0>; the last R_z only adds a phase.
inline CVector haar_qubit(RngStream& rng) {
    double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double cos_beta = rng.uniform(-1.0, 1.0);
    double eta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    CVector v = bloch_qubit(alpha, std::acos(cos_beta));
    return v * std::polar(1.0, -0.5 * eta);
}

inline StateVector product_state(const std::vector<CVector>& qubits) {
    CVector v = qubits.at(0);
    for (std::size_t j = 1; j < qubits.size(); ++j) v = kron(v, qubits[j]);
    return StateVector::normalized(std::move(v), static_cast<int>(qubits.size()));
}

// exp(-i alpha S_z) exp(-i beta S_y) |s,s>, using the Wigner small-d column
// d^s_{m,s}(beta) = sqrt(C(2s, s-m)) cos^{s+m}(beta/2) sin^{s-m}(beta/2).
inline CVector spin_coherent_state(int two_s, double alpha, double beta) {
    const int d = two_s + 1;
    const double s = 0.5 * two_s;
    const double c = std::cos(0.5 * beta), sn = std::sin(0.5 * beta);
    CVector v(d);
    for (int k = 0; k < d; ++k) {
        double m = s - k;
        double lbin = std::lgamma(two_s + 1.0) - std::lgamma(k + 1.0) - std::lgamma(two_s - k + 1.0);
        double mag = std::exp(0.5 * lbin) * std::pow(c, two_s - k) * std::pow(sn, k);
        v[k] = std::polar(mag, -alpha * m);
    }
    return v / v.norm();
}

// ---- free-fermionic Gaussian states ----

// K = 1/2 sum_{mu<nu} Q_{mu nu} (i gamma_mu gamma_nu), so that
// exp(-i K) = exp(1/4 sum_{mu,nu} Q_{mu nu} gamma_mu gamma_nu).
inline CMatrix gaussian_generator(const RMatrix& q, int n) {
    const std::uint64_t d = dim_of(n);
    CMatrix k = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (int mu = 1; mu <= 2 * n; ++mu)
        for (int nu = mu + 1; nu <= 2 * n; ++nu) {
            double c = 0.5 * q(mu - 1, nu - 1);
            if (c == 0.0) continue;
            PauliString p = scaled_by_i(majorana(n, mu) * majorana(n, nu));
            cplx ph = i_pow(p.phase_pow) * c;
            for (std::uint64_t b = 0; b < d; ++b) {
                double s = (popcount(p.z_bits & b) & 1) ? -1.0 : 1.0;
                k(static_cast<Eigen::Index>(b ^ p.x_bits), static_cast<Eigen::Index>(b)) += ph * s;
            }
        }
    return k;
}

// Spinor representative of A in SO(2n): U^dag gamma_mu U = sum_nu A_{mu nu} gamma_nu.
inline CMatrix gaussian_unitary_from_log(const RMatrix& q, int n) {
    return matrix_exp(gaussian_generator(q, n), cplx(0.0, -1.0));
}

// max_mu ||gamma_mu U - U sum_nu A_{mu nu} gamma_nu||_F. This equals the
// Frobenius norm of U^dag gamma_mu U - sum_nu A_{mu nu} gamma_nu and bounds its
// max-norm, without any dense matrix product.
inline double verify_gaussian_adjoint(const RMatrix& a, const CMatrix& u, int n) {
    const std::uint64_t d = dim_of(n);
    if (a.rows() != 2 * n || a.cols() != 2 * n) throw DimensionError("verify_gaussian_adjoint: A must be 2n x 2n");
    if (static_cast<std::uint64_t>(u.rows()) != d || u.rows() != u.cols())
        throw DimensionError("verify_gaussian_adjoint: U must be 2^n x 2^n");
    const auto D = static_cast<Eigen::Index>(d);
    std::vector<PauliString> g;
    for (int mu = 1; mu <= 2 * n; ++mu) g.push_back(majorana(n, mu));

    // U gamma_nu for every nu
    std::vector<CMatrix> ug(g.size(), CMatrix(D, D));
    for (std::size_t nu = 0; nu < g.size(); ++nu) {
        const auto& p = g[nu];
        cplx ph = i_pow(p.phase_pow);
        for (std::uint64_t c = 0; c < d; ++c) {
            double s = (popcount(p.z_bits & c) & 1) ? -1.0 : 1.0;
            ug[nu].col(static_cast<Eigen::Index>(c)) = (ph * s) * u.col(static_cast<Eigen::Index>(c ^ p.x_bits));
        }
    }
    double worst = 0.0;
    CMatrix diff(D, D);
    for (std::size_t mu = 0; mu < g.size(); ++mu) {
        const auto& p = g[mu];
        cplx ph = i_pow(p.phase_pow);
        for (std::uint64_t r = 0; r < d; ++r) {
            std::uint64_t src = r ^ p.x_bits;
            double s = (popcount(p.z_bits & src) & 1) ? -1.0 : 1.0;
            diff.row(static_cast<Eigen::Index>(r)) = (ph * s) * u.row(static_cast<Eigen::Index>(src));
        }
        for (std::size_t nu = 0; nu < g.size(); ++nu) {
            double coef = a(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu));
            if (coef != 0.0) diff -= coef * ug[nu];
        }
        worst = std::max(worst, diff.norm());
    }
    return worst;
}

struct GaussianSample {
    RMatrix a;
    CMatrix u;
    StateVector state;
    double adjoint_error = 0.0;
};

inline GaussianSample sample_gaussian(int n, RngStream& rng) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        RMatrix a = haar_orthogonal(2 * n, rng, /*special=*/true);
        RMatrix q;
        try {
            q = so_matrix_log(a);
        } catch (const ResampleError&) {
            continue;
        }
        CMatrix u = gaussian_unitary_from_log(q, n);
        double err = verify_gaussian_adjoint(a, u, n);
        if (err >= 1e-7) continue;
        StateVector st = StateVector::normalized(u.col(0), n);
        return GaussianSample{std::move(a), std::move(u), std::move(st), err};
    }
    throw std::runtime_error("sample_gaussian: no acceptable sample in 32 attempts");
}

// ---- Sn-equivariant evolution on the symmetric subspace ----

// Each normalized Sn-twirl restricted to the Dicke basis
// |D_w> = C(n,w)^{-1/2} sum_{|b|=w} |b>, in the fixed orbit order.
inline std::vector<CMatrix> build_sn_dicke_generators(int n) {
    const std::uint64_t d = dim_of(n);
    std::vector<double> norm(static_cast<std::size_t>(n + 1));
    for (int w = 0; w <= n; ++w)
        norm[static_cast<std::size_t>(w)] =
            std::sqrt(std::exp(std::lgamma(n + 1.0) - std::lgamma(w + 1.0) - std::lgamma(n - w + 1.0)));
    std::vector<CMatrix> out;
    for (const auto& orb : sn_orbits(n)) {
        CMatrix m = CMatrix::Zero(n + 1, n + 1);
        for (const auto& p : orb.strings) {
            cplx ph = i_pow(p.phase_pow) * orb.coeff;
            for (std::uint64_t b = 0; b < d; ++b) {
                int wb = popcount(b), wt = popcount(b ^ p.x_bits);
                double s = (popcount(p.z_bits & b) & 1) ? -1.0 : 1.0;
                m(wt, wb) += ph * s;
            }
        }
        for (int r = 0; r <= n; ++r)
            for (int c = 0; c <= n; ++c)
                m(r, c) /= norm[static_cast<std::size_t>(r)] * norm[static_cast<std::size_t>(c)];
        out.push_back(std::move(m));
    }
    return out;
}

inline const std::vector<CMatrix>& sn_dicke_generators(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<std::vector<CMatrix>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<std::vector<CMatrix>>(build_sn_dicke_generators(n));
    return *slot;
}

inline CVector dicke_to_qubits(const CVector& sym, int n) {
    const std::uint64_t d = dim_of(n);
    CVector out(static_cast<Eigen::Index>(d));
    for (std::uint64_t b = 0; b < d; ++b) {
        int w = popcount(b);
        double nrm = std::sqrt(std::exp(std::lgamma(n + 1.0) - std::lgamma(w + 1.0) - std::lgamma(n - w + 1.0)));
        out[static_cast<Eigen::Index>(b)] = sym[w] / nrm;
    }
    return out;
}

// Gaussian coefficients for each of the L layers, drawn layer by layer in orbit order.
inline std::vector<std::vector<double>> draw_sn_thetas(int n, int depth, RngStream& rng) {
    const std::size_t k = sn_orbits(n).size();
    std::vector<std::vector<double>> th(static_cast<std::size_t>(depth), std::vector<double>(k));
    for (auto& layer : th)
        for (auto& t : layer) t = rng.normal();
    return th;
}

inline StateVector sn_evolve(int n, const std::vector<std::vector<double>>& thetas) {
    const auto& gens = sn_dicke_generators(n);
    CVector v = CVector::Zero(n + 1);
    v[0] = 1.0;
    for (const auto& layer : thetas) {
        CMatrix h = CMatrix::Zero(n + 1, n + 1);
        for (std::size_t k = 0; k < gens.size(); ++k) h += layer[k] * gens[k];
        v = matrix_exp(h, cplx(0.0, 1.0)) * v;
    }
    return StateVector::normalized(dicke_to_qubits(v, n), n);
}

inline StateVector sample_state(const FamilySpec& spec, RngStream& rng) {
    spec.validate();
    const int n = spec.n;
    const int d = static_cast<int>(dim_of(n));
    switch (spec.family) {
        case FamilyId::haar: return StateVector::normalized(haar_unitary_first_column(d, rng), n);
        case FamilyId::ent: {
            std::vector<CVector> qs;
            for (int j = 0; j < n; ++j) qs.push_back(haar_qubit(rng));
            return product_state(qs);
        }
        case FamilyId::uent: return product_state(std::vector<CVector>(static_cast<std::size_t>(n), haar_qubit(rng)));
        case FamilyId::coh: {
            double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);
            double beta = std::acos(rng.uniform(-1.0, 1.0));
            return StateVector::normalized(spin_coherent_state(d - 1, alpha, beta), n);
        }
        case FamilyId::imag: return StateVector::normalized(haar_orthogonal_first_column(d, rng).cast<cplx>(), n);
        case FamilyId::real: {
            RMatrix o = haar_orthogonal(d, rng);
            CVector plus_y(d);
            double amp = std::pow(std::sqrt(0.5), n);
            for (int b = 0; b < d; ++b) plus_y[b] = amp * i_pow(popcount(static_cast<std::uint64_t>(b)));
            return StateVector::normalized(o.cast<cplx>() * plus_y, n);
        }
        case FamilyId::ferm: return sample_gaussian(n, rng).state;
        case FamilyId::stab: return stabilizer_state(random_clifford(n, rng));
        case FamilyId::sn: return sn_evolve(n, draw_sn_thetas(n, spec.sn_depth(), rng));
    }
    throw std::logic_error("sample_state: unreachable");
}

}  // namespace qrtx
