#include "seglab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "seglab/calculus.hpp"
#include "seglab/interp.hpp"

namespace seglab {

namespace {

// Primitive of sqrt(r^2 - u^2).
inline double W(double r, double u) {
    u = std::clamp(u, -r, r);
    double w = std::sqrt(std::max(r * r - u * u, 0.0));
    return 0.5 * (u * w + r * r * std::asin(std::clamp(u / r, -1.0, 1.0)));
}

// Area of {u <= x, v <= y} inside the disk of radius r centered at 0.
double corner_area(double r, double x, double y) {
    if (x <= -r || y <= -r) return 0.0;
    const double X = std::clamp(x, -r, r);
    if (y >= r) return 2.0 * (W(r, X) - W(r, -r));
    const double s = std::sqrt(std::max(r * r - y * y, 0.0));
    if (y >= 0.0) {
        double area = 2.0 * (W(r, X) - W(r, -r));
        if (X > -s) {
            double b = std::min(X, s);
            area += y * (b + s) - (W(r, b) - W(r, -s));
        }
        return area;
    }
    double b = std::clamp(X, -s, s);
    if (b <= -s) return 0.0;
    return y * (b + s) + (W(r, b) - W(r, -s));
}

} // namespace

double disk_rect_area(double r, double x1, double x2, double y1, double y2) {
    double a = corner_area(r, x2, y2) - corner_area(r, x1, y2) - corner_area(r, x2, y1) +
               corner_area(r, x1, y1);
    return std::max(a, 0.0);
}

void require_ball(const Grid2D& g, Point c, double r, double margin) {
    if (!(r > 0.0)) throw BallOutOfDomain("ball radius must be positive");
    if (!g.contains_ball(c, r, margin)) throw BallOutOfDomain("ball exceeds grid margin");
}

double ball_integral(const ScalarField& f, Point center, double r) {
    require_ball(f.grid, center, r, 2.0 * f.grid.h);
    const Grid2D& g = f.grid;
    return ball_weighted_sum(g, center, r,
                             [&](int i, int j) { return f.values[g.idx(i, j)]; });
}

namespace {

template <class Sample>
double circle_sum(const Grid2D& g, Point c, double r, int n, Sample&& sample) {
    require_ball(g, c, r, 2.0 * g.h);
    const int n_min = circle_min_samples(r, g.h);
    if (n == 0) n = n_min;
    if (n < n_min) throw Error("circle quadrature: too few samples for this radius");
    std::vector<double> vals(n);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * M_PI * k / n;
        vals[k] = sample(Point{c.x + r * std::cos(th), c.y + r * std::sin(th)}, th);
    }
    return kernels::det_sum(vals) * (2.0 * M_PI * r / n);
}

} // namespace

double circle_integral(const ScalarField& f, Point center, double r, int n_samples) {
    return circle_sum(f.grid, center, r, n_samples,
                      [&](Point p, double) { return interp_value(f, p); });
}

std::vector<std::pair<double, double>> radial_derivative(const VectorField& grad, Point center,
                                                         double r, int n_samples) {
    require_ball(grad.grid, center, r, 2.0 * grad.grid.h);
    const int n_min = circle_min_samples(r, grad.grid.h);
    int n = n_samples == 0 ? n_min : n_samples;
    if (n < n_min) throw Error("circle quadrature: too few samples for this radius");
    std::vector<std::pair<double, double>> out(n);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * M_PI * k / n;
        double cx = std::cos(th), sy = std::sin(th);
        double gx, gy;
        interp_vector(grad, {center.x + r * cx, center.y + r * sy}, gx, gy);
        out[k] = {th, gx * cx + gy * sy};
    }
    return out;
}

std::vector<std::pair<double, double>> radial_derivative(const ScalarField& f, Point center,
                                                         double r, int n_samples) {
    VectorField grad = gradient(f);
    return radial_derivative(grad, center, r, n_samples);
}

} // namespace seglab
