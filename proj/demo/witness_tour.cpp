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

// A short tour: a few named states, their witness vectors, and the exact
// family averages they should be compared with.

#include <cstdio>
#include <numbers>

#include "qrtx/qrtx.hpp"

using namespace qrtx;

namespace {

void show(const char* name, const StateVector& psi) {
    auto v = witness_vector(psi);
    std::printf("%-10s", name);
    for (auto w : kAllWitnesses) std::printf(" %8.5f", v[w]);
    std::printf("\n");
}

}  // namespace

int main() {
    const int n = 4;
    const int d = static_cast<int>(dim_of(n));
    std::printf("%-10s", "state");
    for (auto w : kAllWitnesses) std::printf(" %8s", to_string(w));
    std::printf("\n");

    show("|0000>", StateVector::basis(n));

    CVector ghz = CVector::Zero(d);
    ghz[0] = ghz[d - 1] = 1.0 / std::numbers::sqrt2;
    show("GHZ", StateVector::from_amplitudes(ghz, n));

    // the single-qubit magic state, on every qubit
    show("T^4", uniform_product_state(std::numbers::pi / 4, std::acos(1 / std::sqrt(3.0)), n));

    RngStream rng(7, 0);
    for (auto f : kAllFamilies) {
        auto psi = sample_state(FamilySpec{f, n, {}}, rng);
        std::string label = std::string("~") + to_string(f);
        show(label.c_str(), psi);
    }

    std::printf("\nexact Haar averages at n=%d:\n", n);
    for (auto w : kAllWitnesses)
        if (has_closed_form(FamilyId::haar, w, n))
            std::printf("  %-5s %s\n", to_string(w), to_string(exact_expected_value(FamilyId::haar, w, n)).c_str());
    return 0;
}
