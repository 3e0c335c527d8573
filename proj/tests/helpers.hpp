// Shared helpers for the test suites.
#pragma once
#include <cmath>
#include <vector>

#include "seglab/config.hpp"
#include "seglab/grid.hpp"

namespace seglab::testing {

/// Grid of (2n+1)^2 nodes centered at the origin with spacing half/n,
/// covering [-half, half]^2 with a node exactly at (0,0).
inline Grid2D centered_grid(int n, double half) {
    return Grid2D(2 * n + 1, 2 * n + 1, half / n, {-half, -half});
}

/// The signed prototype r^{m/2} cos(m theta/2 + phase) in Cartesian form.
inline double harmonic_prototype(int m, double x, double y, double phase = 0.0) {
    double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    double th = std::atan2(y, x);
    return std::pow(r, 0.5 * m) * std::cos(0.5 * m * th + phase);
}

inline ScalarField sample(const Grid2D& g, double (*f)(double, double)) {
    ScalarField out(g);
    out.fill_with(f);
    return out;
}

/// Two-component planar configuration (x^+, x^-) with zero reaction.
inline SegregatedConfig planar_config(const Grid2D& g) {
    ScalarField up(g), um(g);
    up.fill_with([](double x, double) { return std::max(x, 0.0); });
    um.fill_with([](double x, double) { return std::max(-x, 0.0); });
    std::vector<ScalarField> comps{up, um};
    return SegregatedConfig(std::move(comps), ReactionSpec::zero(2));
}

} // namespace seglab::testing
