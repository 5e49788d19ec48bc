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
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "qrtx/rng.hpp"

namespace qrtx {

struct MinimizeResult {
    std::vector<double> x;
    double value = INFINITY;
    int evaluations = 0;
};

// Nelder-Mead with the usual coefficients (1, 2, 1/2, 1/2).
inline MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<double> x0, double step = 0.5, double ftol = 1e-14,
                                  int max_evals = 20000) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    std::vector<double> val(n + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    for (std::size_t i = 0; i <= n; ++i) val[i] = eval(pts[i]);
    std::vector<std::size_t> order(n + 1);
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
        if (std::abs(val[worst] - val[best]) <= ftol) {
            double spread = 0;
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(pts[i][k] - pts[best][k]));
            if (spread < 1e-9) break;
        }
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t k = 0; k < n; ++k) c[k] += pts[i][k] / static_cast<double>(n);
        auto along = [&](double t) {
            std::vector<double> y(n);
            for (std::size_t k = 0; k < n; ++k) y[k] = c[k] + t * (pts[worst][k] - c[k]);
            return y;
        };
        auto xr = along(-1.0);
        double fr = eval(xr);
        if (fr < val[best]) {
            auto xe = along(-2.0);
            double fe = eval(xe);
            if (fe < fr) pts[worst] = xe, val[worst] = fe;
            else pts[worst] = xr, val[worst] = fr;
        } else if (fr < val[second]) {
            pts[worst] = xr, val[worst] = fr;
        } else {
            auto xc = fr < val[worst] ? along(-0.5) : along(0.5);
            double fc = eval(xc);
            if (fc < std::min(fr, val[worst])) {
                pts[worst] = xc, val[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
                    val[i] = eval(pts[i]);
                }
            }
        }
    }
    std::size_t b = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
    return {pts[b], val[b], evals};
}

// Best of several Nelder-Mead runs from uniform starts in [lo, hi]^dim.
inline MinimizeResult multistart_minimize(const std::function<double(const std::vector<double>&)>& f, std::size_t dim,
                                          double lo, double hi, int starts, std::uint64_t seed) {
    RngStream rng(seed, 0x6d696e);
    MinimizeResult best;
    for (int s = 0; s < starts; ++s) {
        std::vector<double> x0(dim);
        for (auto& v : x0) v = rng.uniform(lo, hi);
        auto r = nelder_mead(f, x0, 0.25 * (hi - lo));
        r = nelder_mead(f, r.x, 1e-3);  // restart to shake off a collapsed simplex
        if (r.value < best.value) best = r;
    }
    return best;
}

}  // namespace qrtx
