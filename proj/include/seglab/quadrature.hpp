// Ball and circle quadrature. Cells cut by the circle get exact-area
// circle/square intersection weights, so integrals are smooth in r.
#pragma once
#include <utility>
#include <vector>

#include "seglab/grid.hpp"
#include "seglab/kernels.hpp"

namespace seglab {

/// Exact area of the intersection of the disk B_r(0) with the axis-aligned
/// rectangle [x1,x2] x [y1,y2] (coordinates relative to the disk center).
double disk_rect_area(double r, double x1, double x2, double y1, double y2);

/// Number of quadrature samples required on a circle of radius r.
inline int circle_min_samples(double r, double h) {
    int n = static_cast<int>(std::ceil(8.0 * M_PI * r / h));
    return std::max(64, n);
}

void require_ball(const Grid2D& g, Point c, double r, double margin);

/// Sum of getter(i,j) over nodes weighted by the area of the node cell
/// [x +- h/2] x [y +- h/2] clipped against B_r(c). Row partials are combined
/// in fixed order, so the result is independent of the thread count.
template <class Getter>
double ball_weighted_sum(const Grid2D& g, Point c, double r, Getter&& getter) {
    const double h = g.h;
    const double half = 0.5 * h;
    const double corner = half * std::sqrt(2.0);
    int i_lo = std::max(0, static_cast<int>(std::floor((c.x - r - h - g.origin.x) / h)));
    int i_hi = std::min(g.nx - 1, static_cast<int>(std::ceil((c.x + r + h - g.origin.x) / h)));
    int j_lo = std::max(0, static_cast<int>(std::floor((c.y - r - h - g.origin.y) / h)));
    int j_hi = std::min(g.ny - 1, static_cast<int>(std::ceil((c.y + r + h - g.origin.y) / h)));
    if (i_lo > i_hi || j_lo > j_hi) return 0.0;
    std::vector<double> row_sum(j_hi - j_lo + 1, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = j_lo; j <= j_hi; ++j) {
        double s = 0.0;
        const double y = g.y(j);
        const double dy = y - c.y;
        for (int i = i_lo; i <= i_hi; ++i) {
            const double x = g.x(i);
            const double dx = x - c.x;
            const double d = std::sqrt(dx * dx + dy * dy);
            double w;
            if (d <= r - corner) {
                w = h * h;
            } else if (d >= r + corner) {
                continue;
            } else {
                w = disk_rect_area(r, dx - half, dx + half, dy - half, dy + half);
                if (w == 0.0) continue;
            }
            s += w * getter(i, j);
        }
        row_sum[j - j_lo] = s;
    }
    double total = 0.0;
    for (double s : row_sum) total += s;
    return total;
}

/// Integral of f over B_r(center). Requires the ball inside the grid with a
/// 2h margin.
double ball_integral(const ScalarField& f, Point center, double r);

/// Integral of f over the circle of radius r (trapezoid rule on equispaced
/// angles, bicubic samples). n_samples = 0 picks the minimum allowed count.
double circle_integral(const ScalarField& f, Point center, double r, int n_samples = 0);

/// Outward radial derivative <grad f, nu> at equispaced circle samples.
std::vector<std::pair<double, double>> radial_derivative(const ScalarField& f, Point center,
                                                         double r, int n_samples = 0);
std::vector<std::pair<double, double>> radial_derivative(const VectorField& grad, Point center,
                                                         double r, int n_samples = 0);

} // namespace seglab
