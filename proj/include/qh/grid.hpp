#pragma once

#include <string>
#include <vector>

#include "qh/errors.hpp"
#include "qh/timefunction.hpp"

namespace qh {

/// Uniform time grid on [t0, t1] with steps intervals (steps+1 nodes).
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int steps = 1;

    TimeGrid() = default;
    TimeGrid(double start, double end, int n) : t0(start), t1(end), steps(n) {
        if (!(t1 > t0)) throw InvalidArgument("TimeGrid: t1 must exceed t0");
        if (steps < 1) throw InvalidArgument("TimeGrid: steps must be positive");
    }

    double dt() const { return (t1 - t0) / steps; }
    int nodes() const { return steps + 1; }
    double node(int k) const { return t0 + k * dt(); }
    double midpoint(int k) const { return t0 + (k + 0.5) * dt(); }
};

/// Default clearance demanded between grid points and coefficient poles.
inline constexpr double kSingularityMargin = 1e-2;

/// Throws SingularityOnGrid if any node or step midpoint of the grid comes
/// closer than margin to a declared singularity of f.
inline void require_clear_of_singularities(const TimeGrid& grid, const TimeFunction& f,
                                           double margin = kSingularityMargin,
                                           const std::string& label = "coefficient") {
    for (int k = 0; k <= grid.steps; ++k) {
        const double d = f.singularity_distance(grid.node(k));
        if (d < margin)
            throw SingularityOnGrid("grid node t=" + std::to_string(grid.node(k)) +
                                    " within " + std::to_string(margin) + " of a pole of " + label);
        if (k < grid.steps) {
            const double dm = f.singularity_distance(grid.midpoint(k));
            if (dm < margin)
                throw SingularityOnGrid("grid midpoint t=" + std::to_string(grid.midpoint(k)) +
                                        " within " + std::to_string(margin) + " of a pole of " +
                                        label);
        }
    }
}

/// Time-indexed sequence of values (matrices or state vectors), one per node.
template <typename T>
struct Trajectory {
    TimeGrid grid;
    std::vector<T> values;

    const T& at(int k) const { return values[static_cast<size_t>(k)]; }
    T& at(int k) { return values[static_cast<size_t>(k)]; }
    int nodes() const { return static_cast<int>(values.size()); }
};

} // namespace qh
