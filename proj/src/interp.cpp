#include "seglab/interp.hpp"

#include <algorithm>
#include <cmath>

namespace seglab {

namespace detail {

CubicAxis cubic_axis(double t, int n) {
    int cell = static_cast<int>(std::floor(t));
    int base = std::clamp(cell - 1, 0, n - 4);
    double q = t - base;
    CubicAxis a;
    a.base = base;
    const double q1 = q - 1.0, q2 = q - 2.0, q3 = q - 3.0;
    a.w[0] = -q1 * q2 * q3 / 6.0;
    a.w[1] = q * q2 * q3 / 2.0;
    a.w[2] = -q * q1 * q3 / 2.0;
    a.w[3] = q * q1 * q2 / 6.0;
    return a;
}

} // namespace detail

double interp_value(const ScalarField& f, Point p) {
    const Grid2D& g = f.grid;
    if (!g.contains(p)) throw BallOutOfDomain("interp_value: point outside grid");
    auto ax = detail::cubic_axis((p.x - g.origin.x) / g.h, g.nx);
    auto ay = detail::cubic_axis((p.y - g.origin.y) / g.h, g.ny);
    double s = 0.0;
    for (int jj = 0; jj < 4; ++jj) {
        double row = 0.0;
        const double* vals = &f.values[g.idx(ax.base, ay.base + jj)];
        for (int ii = 0; ii < 4; ++ii) row += ax.w[ii] * vals[ii];
        s += ay.w[jj] * row;
    }
    return s;
}

void interp_vector(const VectorField& v, Point p, double& gx, double& gy) {
    const Grid2D& g = v.grid;
    if (!g.contains(p)) throw BallOutOfDomain("interp_vector: point outside grid");
    auto ax = detail::cubic_axis((p.x - g.origin.x) / g.h, g.nx);
    auto ay = detail::cubic_axis((p.y - g.origin.y) / g.h, g.ny);
    double sx = 0.0, sy = 0.0;
    for (int jj = 0; jj < 4; ++jj) {
        double rx = 0.0, ry = 0.0;
        std::size_t k = g.idx(ax.base, ay.base + jj);
        for (int ii = 0; ii < 4; ++ii) {
            rx += ax.w[ii] * v.gx[k + ii];
            ry += ax.w[ii] * v.gy[k + ii];
        }
        sx += ay.w[jj] * rx;
        sy += ay.w[jj] * ry;
    }
    gx = sx;
    gy = sy;
}

} // namespace seglab
