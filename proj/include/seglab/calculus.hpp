// Discrete derivatives on the uniform grid.
#pragma once
#include "seglab/grid.hpp"

namespace seglab {

/// Central differences at interior nodes, one-sided second-order stencils on
/// the boundary ring. Exact for quadratics.
VectorField gradient(const ScalarField& f);

/// 5-point stencil (f_E + f_W + f_N + f_S - 4 f_C)/h^2 at interior nodes.
/// Boundary nodes are flagged invalid with NaN, never zero-filled; use
/// laplacian_is_valid to test.
ScalarField laplacian(const ScalarField& f);

inline bool laplacian_is_valid(const ScalarField& lap, int i, int j) {
    return !lap.grid.is_boundary(i, j) && std::isfinite(lap.at(i, j));
}

/// Per-component gradient that never differences across the support edge of a
/// nonnegative segregated component: where a neighbor value is zero while the
/// node is positive, the stencil switches to a one-sided second-order formula
/// taken from inside the support. Nodes where the component vanishes get the
/// largest one-sided slope toward positive neighbors, so |grad| matches the
/// one-sided limit on the nodal set.
VectorField support_aware_gradient(const ScalarField& f);

} // namespace seglab
