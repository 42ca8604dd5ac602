// Copyright 2026 The bellrot Authors
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
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace bellrot {

struct NelderMeadOptions {
    double initial_step = 1e-2;
    double x_tolerance = 1e-14;  // simplex diameter
    double f_tolerance = 0.0;    // spread of vertex values
    int max_evaluations = 20000;
};

template <std::size_t N>
struct NelderMeadResult {
    std::array<double, N> x{};
    double value = 0.0;
    int evaluations = 0;
};

/// Unconstrained Nelder-Mead with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F &&f, const std::array<double, N> &start,
                                const NelderMeadOptions &opts = {}) {
    using Point = std::array<double, N>;
    std::array<Point, N + 1> simplex;
    std::array<double, N + 1> values;
    int evals = 0;
    auto eval = [&](const Point &p) {
        ++evals;
        return f(p);
    };

    simplex[0] = start;
    for (std::size_t i = 0; i < N; ++i) {
        simplex[i + 1] = start;
        simplex[i + 1][i] += opts.initial_step;
    }
    for (std::size_t i = 0; i <= N; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::array<std::size_t, N + 1> order;
    auto blend = [](const Point &a, const Point &b, double t) {
        Point out;
        for (std::size_t d = 0; d < N; ++d) {
            out[d] = a[d] + t * (b[d] - a[d]);
        }
        return out;
    };

    while (evals < opts.max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[N - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= N; ++i) {
            for (std::size_t d = 0; d < N; ++d) {
                diameter = std::max(diameter, std::abs(simplex[i][d] - simplex[best][d]));
            }
        }
        if (diameter < opts.x_tolerance || values[worst] - values[best] <= opts.f_tolerance) {
            break;
        }

        Point centroid{};
        for (std::size_t i = 0; i <= N; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < N; ++d) {
                centroid[d] += simplex[i][d] / static_cast<double>(N);
            }
        }

        const Point reflected = blend(centroid, simplex[worst], -1.0);
        const double f_reflected = eval(reflected);
        if (f_reflected < values[best]) {
            const Point expanded = blend(centroid, simplex[worst], -2.0);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }

        const bool outside = f_reflected < values[worst];
        const Point contracted = outside ? blend(centroid, reflected, 0.5)
                                         : blend(centroid, simplex[worst], 0.5);
        const double f_contracted = eval(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }

        for (std::size_t i = 0; i <= N; ++i) {
            if (i == best) continue;
            simplex[i] = blend(simplex[best], simplex[i], 0.5);
            values[i] = eval(simplex[i]);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_idx = static_cast<std::size_t>(best_it - values.begin());
    return {simplex[best_idx], *best_it, evals};
}

}  // namespace bellrot
