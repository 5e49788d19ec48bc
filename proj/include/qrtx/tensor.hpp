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

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "qrtx/common.hpp"

namespace qrtx {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// A normalized pure state. n_qubits == 0 marks a generic d-dimensional vector.
class StateVector {
  public:
    StateVector() = default;

    static StateVector basis(int n_qubits, std::uint64_t index = 0) {
        if (n_qubits < 1 || n_qubits > 16) throw DimensionError("basis: n_qubits out of range");
        CVector v = CVector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
        if (index >= dim_of(n_qubits)) throw DimensionError("basis: index out of range");
        v[static_cast<Eigen::Index>(index)] = 1.0;
        return StateVector(std::move(v), n_qubits);
    }

    // Rejects unnormalized input rather than silently rescaling it.
    static StateVector from_amplitudes(CVector amps, int n_qubits) {
        check_shape(amps.size(), n_qubits);
        double nrm = amps.squaredNorm();
        if (std::abs(nrm - 1.0) > tol::norm) {
            std::ostringstream os;
            os << "state not normalized: |psi|^2 = " << nrm;
            throw ContractError(os.str());
        }
        return StateVector(std::move(amps), n_qubits);
    }

    // For producers whose output is normalized only up to accumulated rounding
    // (projections, long products). Rejects zero vectors.
    static StateVector normalized(CVector amps, int n_qubits) {
        check_shape(amps.size(), n_qubits);
        double nrm = amps.norm();
        if (!(nrm > 0.0)) throw ContractError("cannot normalize zero vector");
        amps /= nrm;
        return StateVector(std::move(amps), n_qubits);
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const CVector& amplitudes() const { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
    const cplx* data() const { return amps_.data(); }

  private:
    StateVector(CVector amps, int n) : n_qubits_(n), amps_(std::move(amps)) {}

    static void check_shape(Eigen::Index size, int n_qubits) {
        if (n_qubits < 0 || n_qubits > 16) throw DimensionError("n_qubits out of range");
        if (size < 1) throw DimensionError("empty state");
        if (n_qubits > 0 && static_cast<std::uint64_t>(size) != dim_of(n_qubits))
            throw DimensionError("amplitude count does not match 2^n_qubits");
    }

    int n_qubits_ = 0;
    CVector amps_;
};

template <typename Derived>
inline double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() ? static_cast<double>(m.cwiseAbs().maxCoeff()) : 0.0;
}

// ||U^dag U - I||_max
inline double unitarity_error(const CMatrix& u) {
    if (u.rows() != u.cols()) return INFINITY;
    return max_abs(CMatrix(u.adjoint() * u) - CMatrix::Identity(u.rows(), u.cols()));
}

inline double orthogonality_error(const RMatrix& a) {
    if (a.rows() != a.cols()) return INFINITY;
    return max_abs(RMatrix(a.transpose() * a) - RMatrix::Identity(a.rows(), a.cols()));
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

inline StateVector apply_unitary(const CMatrix& u, const StateVector& psi) {
    if (u.rows() != u.cols()) throw DimensionError("apply_unitary: matrix not square");
    if (static_cast<std::size_t>(u.rows()) != psi.dim())
        throw DimensionError("apply_unitary: dimension mismatch");
    double err = unitarity_error(u);
    if (err > tol::unitary) {
        std::ostringstream os;
        os << "apply_unitary: ||U^dag U - I||_max = " << err;
        throw ContractError(os.str());
    }
    CVector out = u * psi.amplitudes();
    // Unitarity is only checked to 1e-9, so the output norm can drift by that
    // much; fold it back so the 1e-10 state invariant holds.
    return StateVector::normalized(std::move(out), psi.n_qubits());
}

struct HermitianEig {
    RVector values;   // ascending
    CMatrix vectors;  // columns
};

inline HermitianEig hermitian_eig(const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) throw Error("hermitian_eig: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

inline bool is_hermitian(const CMatrix& h, double eps = tol::normal) {
    return h.rows() == h.cols() && max_abs(CMatrix(h - h.adjoint())) <= eps * std::max(1.0, max_abs(h));
}

// exp(scale * H). Hermitian and anti-Hermitian inputs go through the Hermitian
// eigensolver, other normal matrices through the complex Schur form (which is
// diagonal for normal matrices), everything else through Pade scaling and squaring.
inline CMatrix matrix_exp(const CMatrix& h, cplx scale = 1.0) {
    if (h.rows() != h.cols()) throw DimensionError("matrix_exp: matrix not square");
    const Eigen::Index d = h.rows();
    if (d == 0) return h;
    const double mag = std::max(1.0, max_abs(h));

    auto from_eig = [&](const HermitianEig& e, cplx factor) {
        CVector w(d);
        for (Eigen::Index i = 0; i < d; ++i) w[i] = std::exp(factor * e.values[i]);
        return CMatrix(e.vectors * w.asDiagonal() * e.vectors.adjoint());
    };

    if (max_abs(CMatrix(h - h.adjoint())) <= tol::normal * mag) {
        return from_eig(hermitian_eig(CMatrix((h + h.adjoint()) * 0.5)), scale);
    }
    if (max_abs(CMatrix(h + h.adjoint())) <= tol::normal * mag) {
        // H = i K with K Hermitian.
        CMatrix k = (h - h.adjoint()) * cplx(0.0, -0.5);
        return from_eig(hermitian_eig(k), scale * cplx(0.0, 1.0));
    }
    CMatrix hh = h * h.adjoint(), hh2 = h.adjoint() * h;
    if (max_abs(CMatrix(hh - hh2)) <= tol::normal * mag * mag) {
        Eigen::ComplexSchur<CMatrix> cs(h);
        const CMatrix& t = cs.matrixT();
        CVector w(d);
        for (Eigen::Index i = 0; i < d; ++i) w[i] = std::exp(scale * t(i, i));
        return cs.matrixU() * w.asDiagonal() * cs.matrixU().adjoint();
    }
    CMatrix sh = scale * h;
    return sh.exp();
}

inline RMatrix real_matrix_exp(const RMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("real_matrix_exp: matrix not square");
    return a.exp();
}

// Principal logarithm of A in SO(m). The real Schur form of an orthogonal
// matrix is block diagonal with 2x2 rotation blocks and +-1 singletons, and the
// Schur vectors stay orthogonal even when eigenvalues are degenerate.
inline RMatrix so_matrix_log(const RMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("so_matrix_log: matrix not square");
    const Eigen::Index m = a.rows();
    double oerr = orthogonality_error(a);
    if (oerr > tol::unitary) {
        std::ostringstream os;
        os << "so_matrix_log: ||A^T A - I||_max = " << oerr;
        throw ContractError(os.str());
    }
    double det = a.determinant();
    if (std::abs(det - 1.0) > tol::unitary) {
        std::ostringstream os;
        os << "so_matrix_log: det(A) = " << det << ", not in SO";
        throw ContractError(os.str());
    }
    if (m == 0) return a;

    Eigen::RealSchur<RMatrix> rs(a);
    const RMatrix& t = rs.matrixT();
    const RMatrix& q = rs.matrixU();
    RMatrix lt = RMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m;) {
        if (i + 1 < m && t(i + 1, i) != 0.0) {
            // [[c, -s], [s, c]] up to Schur standardization
            double c = 0.5 * (t(i, i) + t(i + 1, i + 1));
            double s = 0.5 * (t(i + 1, i) - t(i, i + 1));
            double theta = std::atan2(s, c);
            if (2.0 * std::abs(std::cos(0.5 * theta)) < tol::branch)
                throw ResampleError("so_matrix_log: eigenvalue at -1");
            lt(i, i + 1) = -theta;
            lt(i + 1, i) = theta;
            i += 2;
        } else {
            if (std::abs(t(i, i) + 1.0) < tol::branch)
                throw ResampleError("so_matrix_log: eigenvalue at -1");
            i += 1;
        }
    }
    RMatrix out = q * lt * q.transpose();
    return 0.5 * (out - out.transpose());
}

}  // namespace qrtx
