#include "seglab/calculus.hpp"

#include <limits>

namespace seglab {

namespace {

inline double central(double fm, double fp, double h) { return (fp - fm) / (2.0 * h); }
inline double fwd2(double f0, double f1, double f2, double h) {
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}
inline double bwd2(double f0, double fm1, double fm2, double h) {
    return (3.0 * f0 - 4.0 * fm1 + fm2) / (2.0 * h);
}

} // namespace

VectorField gradient(const ScalarField& f) {
    const Grid2D& g = f.grid;
    VectorField out(g);
    const double h = g.h;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            std::size_t k = g.idx(i, j);
            if (i == 0)
                out.gx[k] = fwd2(f.at(0, j), f.at(1, j), f.at(2, j), h);
            else if (i == g.nx - 1)
                out.gx[k] = bwd2(f.at(i, j), f.at(i - 1, j), f.at(i - 2, j), h);
            else
                out.gx[k] = central(f.at(i - 1, j), f.at(i + 1, j), h);
            if (j == 0)
                out.gy[k] = fwd2(f.at(i, 0), f.at(i, 1), f.at(i, 2), h);
            else if (j == g.ny - 1)
                out.gy[k] = bwd2(f.at(i, j), f.at(i, j - 1), f.at(i, j - 2), h);
            else
                out.gy[k] = central(f.at(i, j - 1), f.at(i, j + 1), h);
        }
    }
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    const Grid2D& g = f.grid;
    ScalarField out(g, std::numeric_limits<double>::quiet_NaN());
    const double inv_h2 = 1.0 / (g.h * g.h);
#pragma omp parallel for schedule(static)
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            out.at(i, j) = (f.at(i + 1, j) + f.at(i - 1, j) + f.at(i, j + 1) + f.at(i, j - 1) -
                            4.0 * f.at(i, j)) *
                           inv_h2;
        }
    }
    return out;
}

namespace {

// One axis of the support-aware stencil. v0 is the node value, vm*/vp* the
// values toward -/+; have_* say whether those lattice nodes exist.
double support_deriv(double v0, double vm1, double vm2, double vp1, double vp2, bool have_m2,
                     bool have_p2, double h) {
    const bool pos0 = v0 > 0.0;
    const bool posm = vm1 > 0.0;
    const bool posp = vp1 > 0.0;
    if (pos0) {
        if (posm && posp) return central(vm1, vp1, h);
        if (posp && !posm) {
            if (have_p2) return fwd2(v0, vp1, vp2, h);
            return (vp1 - v0) / h;
        }
        if (posm && !posp) {
            if (have_m2) return bwd2(v0, vm1, vm2, h);
            return (v0 - vm1) / h;
        }
        return 0.0;
    }
    // Node on (or beyond) the support edge: report the steeper one-sided slope
    // so the stored value equals the one-sided limit on the nodal set.
    double dp = 0.0, dm = 0.0;
    if (posp) dp = have_p2 ? fwd2(0.0, vp1, vp2, h) : vp1 / h;
    if (posm) dm = have_m2 ? bwd2(0.0, vm1, vm2, h) : -vm1 / h;
    if (posp && posm) return std::abs(dp) >= std::abs(dm) ? dp : dm;
    if (posp) return dp;
    if (posm) return dm;
    return 0.0;
}

} // namespace

VectorField support_aware_gradient(const ScalarField& f) {
    const Grid2D& g = f.grid;
    VectorField out(g);
    const double h = g.h;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            std::size_t k = g.idx(i, j);
            if (g.is_boundary(i, j)) {
                if (i == 0)
                    out.gx[k] = fwd2(f.at(0, j), f.at(1, j), f.at(2, j), h);
                else if (i == g.nx - 1)
                    out.gx[k] = bwd2(f.at(i, j), f.at(i - 1, j), f.at(i - 2, j), h);
                else
                    out.gx[k] = central(f.at(i - 1, j), f.at(i + 1, j), h);
                if (j == 0)
                    out.gy[k] = fwd2(f.at(i, 0), f.at(i, 1), f.at(i, 2), h);
                else if (j == g.ny - 1)
                    out.gy[k] = bwd2(f.at(i, j), f.at(i, j - 1), f.at(i, j - 2), h);
                else
                    out.gy[k] = central(f.at(i, j - 1), f.at(i, j + 1), h);
                continue;
            }
            out.gx[k] = support_deriv(f.at(i, j), f.at(i - 1, j), i >= 2 ? f.at(i - 2, j) : 0.0,
                                      f.at(i + 1, j), i + 2 < g.nx ? f.at(i + 2, j) : 0.0, i >= 2,
                                      i + 2 < g.nx, h);
            out.gy[k] = support_deriv(f.at(i, j), f.at(i, j - 1), j >= 2 ? f.at(i, j - 2) : 0.0,
                                      f.at(i, j + 1), j + 2 < g.ny ? f.at(i, j + 2) : 0.0, j >= 2,
                                      j + 2 < g.ny, h);
        }
    }
    return out;
}

} // namespace seglab
