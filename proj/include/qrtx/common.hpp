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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrtx {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 8;

// Fixed tolerances. Dimensions never exceed 256 so none of these need tuning.
namespace tol {
inline constexpr double norm = 1e-10;
inline constexpr double unitary = 1e-9;
inline constexpr double normal = 1e-10;
inline constexpr double branch = 1e-8;
inline constexpr double clamp = 1e-9;
inline constexpr double imag_residue = 1e-10;
}  // namespace tol

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

// Input violated a numeric contract (non-unitary, non-Hermitian, unnormalized).
struct ContractError : Error {
    using Error::Error;
};

// Matrix log hit the -1 branch cut. The caller is expected to draw again.
struct ResampleError : Error {
    using Error::Error;
};

struct UnsupportedError : Error {
    using Error::Error;
};

inline std::uint64_t dim_of(int n_qubits) { return std::uint64_t{1} << n_qubits; }

inline int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

}  // namespace qrtx
