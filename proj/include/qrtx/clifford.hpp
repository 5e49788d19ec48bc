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

#include <cmath>
#include <cstdint>
#include <vector>

#include "qrtx/pauli.hpp"
#include "qrtx/rng.hpp"
#include "qrtx/tensor.hpp"

namespace qrtx {

// Dense GF(2) matrix, small enough (n <= 8, so 16x16) that nothing clever is needed.
class BitMatrix {
  public:
    BitMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0) {}
    static BitMatrix identity(int n) {
        BitMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint8_t& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    std::uint8_t operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

    BitMatrix operator*(const BitMatrix& o) const {
        BitMatrix out(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k)
                if ((*this)(i, k))
                    for (int j = 0; j < o.cols_; ++j) out(i, j) ^= o(k, j);
        return out;
    }
    BitMatrix transpose() const {
        BitMatrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }
    bool operator==(const BitMatrix& o) const = default;

  private:
    int rows_, cols_;
    std::vector<std::uint8_t> data_;
};

// Inverse of a unit lower-triangular matrix over GF(2), by forward substitution.
inline BitMatrix inverse_unit_lower(const BitMatrix& l) {
    const int n = l.rows();
    BitMatrix inv = BitMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            std::uint8_t acc = 0;
            for (int k = j; k < i; ++k) acc ^= static_cast<std::uint8_t>(l(i, k) & inv(k, j));
            inv(i, j) = acc;
        }
    return inv;
}

// Rows 0..n-1 are destabilizers (images of X_j), rows n..2n-1 stabilizers
// (images of Z_j). Column j < n is the X part of qubit j, column n + j the Z
// part. Row operator is (-1)^sign times the plain letter product.
struct Tableau {
    int n = 0;
    BitMatrix table{0, 0};
    std::vector<std::uint8_t> signs;

    static Tableau identity(int n) {
        Tableau t;
        t.n = n;
        t.table = BitMatrix::identity(2 * n);
        t.signs.assign(static_cast<std::size_t>(2 * n), 0);
        return t;
    }

    PauliString row(int r) const {
        PauliString p{n, 0, 0, 0};
        for (int j = 0; j < n; ++j) {
            std::uint64_t bit = std::uint64_t{1} << (n - 1 - j);
            if (table(r, j)) p.x_bits |= bit;
            if (table(r, n + j)) p.z_bits |= bit;
        }
        p.phase_pow = (p.y_count() + 2 * signs[static_cast<std::size_t>(r)]) & 3;
        return p;
    }
    PauliString stabilizer(int j) const { return row(n + j); }
    PauliString destabilizer(int j) const { return row(j); }

    // T Omega T^T == Omega with Omega = [[0, I], [I, 0]].
    bool is_symplectic() const {
        for (int a = 0; a < 2 * n; ++a)
            for (int b = 0; b < 2 * n; ++b) {
                int form = 0;
                for (int j = 0; j < n; ++j)
                    form ^= (table(a, j) & table(b, n + j)) ^ (table(a, n + j) & table(b, j));
                int want = (a % n == b % n && a != b) ? 1 : 0;
                if (form != want) return false;
            }
        return true;
    }
};

namespace detail {

// Quantum Mallows sample of the Hadamard layer and qubit permutation.
inline void sample_qmallows(int n, RngStream& rng, std::vector<std::uint8_t>& had, std::vector<int>& perm) {
    had.assign(static_cast<std::size_t>(n), 0);
    perm.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> inds(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) inds[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n; ++i) {
        int m = n - i;
        double eps = std::ldexp(1.0, -2 * m);
        double r = rng.uniform_open();
        int index = -static_cast<int>(std::ceil(std::log2(r + (1.0 - r) * eps)));
        had[static_cast<std::size_t>(i)] = index < m;
        int k = index < m ? index : 2 * m - index - 1;
        perm[static_cast<std::size_t>(i)] = inds[static_cast<std::size_t>(k)];
        inds.erase(inds.begin() + k);
    }
}

inline void fill_strict_lower(BitMatrix& m, RngStream& rng, bool symmetric) {
    for (int r = 1; r < m.rows(); ++r)
        for (int c = 0; c < r; ++c) {
            m(r, c) = static_cast<std::uint8_t>(rng.bit());
            if (symmetric) m(c, r) = m(r, c);
        }
}

inline BitMatrix block2x2(const BitMatrix& a, const BitMatrix& b, const BitMatrix& c, const BitMatrix& d) {
    const int n = a.rows();
    BitMatrix out(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out(i, j) = a(i, j);
            out(i, n + j) = b(i, j);
            out(n + i, j) = c(i, j);
            out(n + i, n + j) = d(i, j);
        }
    return out;
}

}  // namespace detail

// Uniformly random n-qubit Clifford (Bravyi-Maslov canonical form).
inline Tableau random_clifford(int n, RngStream& rng) {
    if (n < 1 || n > kMaxQubits) throw DimensionError("random_clifford: n out of range");
    std::vector<std::uint8_t> had;
    std::vector<int> perm;
    detail::sample_qmallows(n, rng, had, perm);

    BitMatrix gamma1(n, n), gamma2(n, n);
    for (int i = 0; i < n; ++i) gamma1(i, i) = static_cast<std::uint8_t>(rng.bit());
    for (int i = 0; i < n; ++i) gamma2(i, i) = static_cast<std::uint8_t>(rng.bit());
    BitMatrix delta1 = BitMatrix::identity(n), delta2 = BitMatrix::identity(n);
    detail::fill_strict_lower(gamma1, rng, true);
    detail::fill_strict_lower(gamma2, rng, true);
    detail::fill_strict_lower(delta1, rng, false);
    detail::fill_strict_lower(delta2, rng, false);

    BitMatrix zero(n, n);
    BitMatrix table1 = detail::block2x2(delta1, zero, gamma1 * delta1, inverse_unit_lower(delta1).transpose());
    BitMatrix table2 = detail::block2x2(delta2, zero, gamma2 * delta2, inverse_unit_lower(delta2).transpose());

    // Row permutation by (perm, n + perm), then the Hadamard row swaps.
    BitMatrix table(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 2 * n; ++c) {
            table(i, c) = table2(perm[static_cast<std::size_t>(i)], c);
            table(n + i, c) = table2(n + perm[static_cast<std::size_t>(i)], c);
        }
    for (int i = 0; i < n; ++i) {
        if (!had[static_cast<std::size_t>(i)]) continue;
        for (int c = 0; c < 2 * n; ++c) std::swap(table(i, c), table(n + i, c));
    }

    Tableau t;
    t.n = n;
    t.table = table1 * table;
    t.signs.resize(static_cast<std::size_t>(2 * n));
    for (auto& s : t.signs) s = static_cast<std::uint8_t>(rng.bit());
    return t;
}

// The state fixed by every stabilizer row. Projects basis states with
// prod_j (I + S_j)/2 until one has non-zero overlap (every stabilizer state
// overlaps some basis state with weight at least 2^-n).
inline StateVector stabilizer_state(const Tableau& t) {
    const int n = t.n;
    const std::uint64_t d = dim_of(n);
    std::vector<PauliString> stabs;
    for (int j = 0; j < n; ++j) stabs.push_back(t.stabilizer(j));
    std::vector<cplx> v(d), w(d);
    for (std::uint64_t start = 0; start < d; ++start) {
        std::fill(v.begin(), v.end(), cplx(0.0));
        v[start] = 1.0;
        for (const auto& s : stabs) {
            apply_pauli(s, v.data(), w.data(), d);
            for (std::uint64_t b = 0; b < d; ++b) v[b] = 0.5 * (v[b] + w[b]);
        }
        double nrm = 0;
        for (auto& a : v) nrm += std::norm(a);
        if (nrm > 0.5 / static_cast<double>(d)) {
            CVector amps = Eigen::Map<CVector>(v.data(), static_cast<Eigen::Index>(d));
            return StateVector::normalized(std::move(amps), n);
        }
    }
    throw std::logic_error("stabilizer_state: no basis state overlaps the stabilizer state");
}

}  // namespace qrtx
