// Bicubic (tensor cubic Lagrange) sampling of grid fields.
#pragma once
#include <array>

#include "seglab/grid.hpp"

namespace seglab {

namespace detail {
struct CubicAxis {
    int base;                      // first of the four lattice nodes
    std::array<double, 4> w;       // Lagrange weights at offsets 0..3
};
CubicAxis cubic_axis(double t, int n);
} // namespace detail

/// Value of the bicubic interpolant at p. Reproduces bicubic polynomials
/// exactly; the stencil shifts one-sided near the grid border.
double interp_value(const ScalarField& f, Point p);

/// Componentwise bicubic interpolation of a stored vector field.
void interp_vector(const VectorField& v, Point p, double& gx, double& gy);

} // namespace seglab
