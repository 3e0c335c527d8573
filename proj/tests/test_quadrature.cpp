#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "seglab/quadrature.hpp"

using namespace seglab;
using namespace seglab::testing;

TEST_CASE("disk/rect overlap matches a dense subsampling oracle") {
    const double r = 0.37;
    auto oracle = [&](double x1, double x2, double y1, double y2) {
        const int n = 400;
        double dx = (x2 - x1) / n, dy = (y2 - y1) / n;
        long cnt = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double x = x1 + (i + 0.5) * dx, y = y1 + (j + 0.5) * dy;
                if (x * x + y * y <= r * r) ++cnt;
            }
        return cnt * dx * dy;
    };
    struct Rect {
        double x1, x2, y1, y2;
    };
    for (Rect rc : {Rect{-0.1, 0.1, -0.1, 0.1}, Rect{0.3, 0.5, -0.05, 0.12},
                    Rect{-0.5, 0.5, -0.5, 0.5}, Rect{0.2, 0.45, 0.2, 0.45},
                    Rect{-0.45, -0.3, -0.2, 0.3}, Rect{0.36, 0.40, -0.02, 0.02}}) {
        double exact = disk_rect_area(r, rc.x1, rc.x2, rc.y1, rc.y2);
        double approx = oracle(rc.x1, rc.x2, rc.y1, rc.y2);
        CHECK(exact == doctest::Approx(approx).epsilon(0.02).scale(r * r));
    }
    // weights over any partition of the plane tile the disk area
    double total = 0.0;
    for (int j = -30; j < 30; ++j)
        for (int i = -30; i < 30; ++i)
            total += disk_rect_area(r, i * 0.02, (i + 1) * 0.02, j * 0.02, (j + 1) * 0.02);
    CHECK(total == doctest::Approx(M_PI * r * r).epsilon(1e-12));
}

TEST_CASE("ball integral: constant, odd and radial-square fields") {
    Grid2D g = centered_grid(256, 0.75);  // h = 0.75/256 < 1/256
    ScalarField one(g, 1.0);
    double a = ball_integral(one, {0.0, 0.0}, 0.5);
    CHECK(a == doctest::Approx(M_PI * 0.25).epsilon(1e-3));

    ScalarField odd(g);
    odd.fill_with([](double x, double) { return x - 0.1; });
    double o = ball_integral(odd, {0.1, 0.0}, 0.5);
    CHECK(std::abs(o) <= 1e-6);

    Grid2D g2 = centered_grid(300, 1.1);
    ScalarField sq(g2);
    sq.fill_with([](double x, double y) { return x * x + y * y; });
    double s = ball_integral(sq, {0.0, 0.0}, 1.0);
    CHECK(s == doctest::Approx(M_PI / 2).epsilon(1e-3));

    CHECK_THROWS_AS(ball_integral(one, {0.7, 0.0}, 0.2), BallOutOfDomain);
}

TEST_CASE("circle integral: circumference, cos^2 and odd symmetry") {
    Grid2D g = centered_grid(256, 1.25);
    ScalarField one(g, 1.0);
    CHECK(circle_integral(one, {0.0, 0.0}, 1.0) == doctest::Approx(2 * M_PI).epsilon(1e-6));

    ScalarField csq(g);
    csq.fill_with([](double x, double y) {
        double r2 = x * x + y * y;
        return r2 > 1e-12 ? x * x / r2 : 0.0;
    });
    CHECK(circle_integral(csq, {0.0, 0.0}, 1.0) == doctest::Approx(M_PI).epsilon(1e-4));

    ScalarField odd(g);
    odd.fill_with([](double x, double y) { return x * y * y + 0.3 * y; });
    CHECK(std::abs(circle_integral(odd, {0.0, 0.0}, 1.0)) <= 1e-8);
}

TEST_CASE("circle integral is stable under doubling the sample count") {
    Grid2D g = centered_grid(256, 1.25);
    ScalarField f(g);
    f.fill_with([](double x, double y) { return 1.0 + x * y + 0.5 * x * x - 0.2 * y * y; });
    double r = 0.9;
    int n0 = circle_min_samples(r, g.h);
    double i1 = circle_integral(f, {0.0, 0.0}, r, n0);
    double i2 = circle_integral(f, {0.0, 0.0}, r, 2 * n0);
    CHECK(std::abs(i2 - i1) <= 1e-8 * std::abs(i1));
}

TEST_CASE("radial derivative: radial, constant and prototype fields") {
    Grid2D g = centered_grid(256, 0.75);
    ScalarField rad(g);
    rad.fill_with([](double x, double y) { return std::hypot(x, y); });
    auto d = radial_derivative(rad, {0.0, 0.0}, 0.4);
    for (auto& [th, v] : d) CHECK(v == doctest::Approx(1.0).epsilon(1e-3));

    ScalarField c(g, 2.0);
    for (auto& [th, v] : radial_derivative(c, {0.0, 0.0}, 0.4)) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("radial derivative of the m=3 prototype at h=1/512") {
    Grid2D g = centered_grid(256, 0.5);  // h = 1/512
    ScalarField f(g);
    f.fill_with([](double x, double y) { return harmonic_prototype(3, x, y); });
    const double r = 0.25;
    auto d = radial_derivative(f, {0.0, 0.0}, r);
    // the sampled field carries the half-angle branch cut along theta = pi;
    // compare against the same branch and skip the cut band where the
    // interpolation stencil straddles the kink
    double worst = 0.0;
    for (auto& [th, v] : d) {
        if (std::abs(th - M_PI) < 0.05) continue;
        double branch_th = th > M_PI ? th - 2.0 * M_PI : th;
        worst = std::max(worst, std::abs(v - 1.5 * std::sqrt(r) * std::cos(1.5 * branch_th)));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("quadrature consistency: ball difference equals integrated circle") {
    Grid2D g = centered_grid(200, 1.0);
    ScalarField f(g);
    f.fill_with([](double x, double y) { return std::exp(-2.0 * (x * x + y * y)) + 0.5 * x; });
    Point c{0.05, -0.02};
    const double r1 = 0.3, r2 = 0.8;
    double lhs = ball_integral(f, c, r2) - ball_integral(f, c, r1);
    const int m = 160;
    double rhs = 0.0;
    for (int k = 0; k <= m; ++k) {
        double rho = r1 + (r2 - r1) * k / m;
        double w = (k == 0 || k == m) ? 0.5 : 1.0;
        rhs += w * circle_integral(f, c, rho);
    }
    rhs *= (r2 - r1) / m;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
}
