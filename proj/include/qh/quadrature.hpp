#pragma once

#include <functional>
#include <vector>

#include "qh/grid.hpp"
#include "qh/matrix.hpp"

namespace qh {

/// Cumulative integral of g from grid.t0 to every node, composite Simpson on
/// each interval subdivided refine times (midpoints evaluated analytically).
inline std::vector<cx> cumulative_simpson(const std::function<cx(double)>& g, const TimeGrid& grid,
                                          int refine = 2) {
    const double h = grid.dt() / refine;
    std::vector<cx> out(static_cast<size_t>(grid.nodes()));
    cx acc{0.0, 0.0};
    out[0] = acc;
    for (int k = 0; k < grid.steps; ++k) {
        for (int r = 0; r < refine; ++r) {
            const double a = grid.node(k) + r * h;
            acc += (h / 6.0) * (g(a) + 4.0 * g(a + 0.5 * h) + g(a + h));
        }
        out[static_cast<size_t>(k + 1)] = acc;
    }
    return out;
}

/// Cumulative integral of a node-sampled series: composite Simpson over node
/// pairs, with a quadratic half-panel rule at odd indices.
template <typename T>
inline std::vector<T> cumulative_simpson_series(const std::vector<T>& f, double dt) {
    const size_t n = f.size();
    std::vector<T> out(n);
    if (n == 0) return out;
    out[0] = T{};
    if (n == 1) return out;
    if (n == 2) {  // no third point: trapezoid is the best available
        out[1] = (dt / 2.0) * (f[0] + f[1]);
        return out;
    }
    out[1] = (dt / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (size_t k = 2; k < n; ++k) {
        if (k % 2 == 0)
            out[k] = out[k - 2] + (dt / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        else
            out[k] = out[k - 1] + (dt / 12.0) * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    }
    return out;
}

} // namespace qh
