// Uniform 2D node-centered grid and the fields living on it.
#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

#include "seglab/errors.hpp"

namespace seglab {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Uniform square-spacing grid: node (i,j) sits at origin + (i*h, j*h),
/// 0 <= i < nx, 0 <= j < ny.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    Point origin;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double h_, Point origin_ = {0.0, 0.0})
        : nx(nx_), ny(ny_), h(h_), origin(origin_) {
        if (nx < 16 || ny < 16) throw Error("Grid2D: nx, ny must be >= 16");
        if (!(h > 0.0)) throw Error("Grid2D: spacing must be positive");
    }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    double x(int i) const { return origin.x + i * h; }
    double y(int j) const { return origin.y + j * h; }
    Point node(int i, int j) const { return {x(i), y(j)}; }

    double extent_x() const { return (nx - 1) * h; }
    double extent_y() const { return (ny - 1) * h; }
    double xmax() const { return origin.x + extent_x(); }
    double ymax() const { return origin.y + extent_y(); }

    bool is_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }

    bool contains(const Point& p, double margin = 0.0) const {
        return p.x >= origin.x + margin && p.x <= xmax() - margin &&
               p.y >= origin.y + margin && p.y <= ymax() - margin;
    }

    /// True when the closed ball B_r(c) lies inside the grid with the given margin.
    bool contains_ball(const Point& c, double r, double margin) const {
        return contains({c.x - r, c.y - r}, margin) && contains({c.x + r, c.y + r}, margin);
    }

    bool same_geometry(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && h == o.h &&
               origin.x == o.origin.x && origin.y == o.origin.y;
    }
};

/// One real value per node, row-major with i fastest.
struct ScalarField {
    Grid2D grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid2D& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& at(int i, int j) { return values[grid.idx(i, j)]; }
    double at(int i, int j) const { return values[grid.idx(i, j)]; }

    template <class F>
    void fill_with(F&& f) {
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                at(i, j) = f(grid.x(i), grid.y(j));
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Two real values per node (x- and y-derivative samples).
struct VectorField {
    Grid2D grid;
    std::vector<double> gx;
    std::vector<double> gy;

    VectorField() = default;
    explicit VectorField(const Grid2D& g)
        : grid(g), gx(g.size(), 0.0), gy(g.size(), 0.0) {}

    double norm2_at(std::size_t k) const { return gx[k] * gx[k] + gy[k] * gy[k]; }
};

} // namespace seglab
