#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "helpers.hpp"
#include "seglab/calculus.hpp"
#include "seglab/io.hpp"

using namespace seglab;
using namespace seglab::testing;

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid2D(8, 32, 0.1), Error);
    CHECK_THROWS_AS(Grid2D(32, 32, -0.1), Error);
    Grid2D g(33, 17, 0.5, {-1.0, 2.0});
    CHECK(g.x(4) == doctest::Approx(1.0));
    CHECK(g.extent_x() == doctest::Approx(16.0));
    CHECK(g.extent_y() == doctest::Approx(8.0));
}

TEST_CASE("gradient: constants and linears are exact") {
    Grid2D g(33, 33, 1.0 / 32, {0.0, 0.0});
    ScalarField c(g, 3.5);
    VectorField gc = gradient(c);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(gc.gx[k] == 0.0);
        CHECK(gc.gy[k] == 0.0);
    }

    ScalarField lin(g);
    lin.fill_with([](double x, double y) { return 3.0 * x - 2.0 * y; });
    VectorField gl = gradient(lin);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(gl.gx[k] == doctest::Approx(3.0));
        CHECK(gl.gy[k] == doctest::Approx(-2.0));
    }
}

TEST_CASE("gradient of x^2 is 2x to machine precision at interior nodes") {
    Grid2D g(101, 101, 0.01, {0.0, 0.0});
    ScalarField f(g);
    f.fill_with([](double x, double) { return x * x; });
    VectorField gf = gradient(f);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
            CHECK(gf.gx[g.idx(i, j)] == doctest::Approx(2.0 * g.x(i)).epsilon(1e-12));
}

TEST_CASE("laplacian: linear->0, quadratic->4 exactly, boundary flagged") {
    Grid2D g = centered_grid(16, 0.5);
    ScalarField lin(g);
    lin.fill_with([](double x, double y) { return 1.0 + 2.0 * x - y; });
    ScalarField L = laplacian(lin);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) CHECK(std::abs(L.at(i, j)) < 1e-10);
    CHECK(!laplacian_is_valid(L, 0, 5));
    CHECK(std::isnan(L.at(0, 5)));

    ScalarField q(g);
    q.fill_with([](double x, double y) { return x * x + y * y; });
    ScalarField Lq = laplacian(q);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) CHECK(Lq.at(i, j) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("laplacian of sin(pi x) sin(pi y) at h=1/128") {
    Grid2D g(129, 129, 1.0 / 128, {0.0, 0.0});
    ScalarField f(g);
    f.fill_with([](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); });
    ScalarField L = laplacian(f);
    double worst = 0.0;
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            double exact = -2.0 * M_PI * M_PI * f.at(i, j);
            if (std::abs(exact) < 1e-3) continue;
            worst = std::max(worst, std::abs(L.at(i, j) - exact) / std::abs(exact));
        }
    }
    CHECK(worst <= 2e-3);
}

TEST_CASE("gradient and laplacian converge at order 2") {
    auto worst_err = [](int n) {
        Grid2D g(n + 1, n + 1, 1.0 / n, {0.0, 0.0});
        ScalarField f(g);
        f.fill_with([](double x, double y) { return std::sin(2 * x + 0.3) * std::cos(1.5 * y); });
        VectorField gf = gradient(f);
        ScalarField L = laplacian(f);
        double e = 0.0;
        for (int j = 1; j < g.ny - 1; ++j) {
            for (int i = 1; i < g.nx - 1; ++i) {
                double x = g.x(i), y = g.y(j);
                double gx = 2.0 * std::cos(2 * x + 0.3) * std::cos(1.5 * y);
                double lap = -(4.0 + 2.25) * std::sin(2 * x + 0.3) * std::cos(1.5 * y);
                e = std::max(e, std::abs(gf.gx[g.idx(i, j)] - gx));
                e = std::max(e, std::abs(L.at(i, j) - lap));
            }
        }
        return e;
    };
    double e1 = worst_err(64), e2 = worst_err(128);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("field round-trips through binary and csv with sidecar header") {
    Grid2D g(17, 21, 0.25, {-1.0, 0.5});
    ScalarField f(g);
    f.fill_with([](double x, double y) { return std::sin(3 * x) + y * y; });

    auto dir = std::filesystem::temp_directory_path() / "seglab_io_test";
    std::filesystem::create_directories(dir);
    for (auto fmt : {FieldFormat::Binary, FieldFormat::Csv}) {
        std::string base = (dir / (fmt == FieldFormat::Binary ? "f_bin" : "f_csv")).string();
        save_field(f, base, fmt);
        ScalarField r = load_field(base);
        CHECK(r.grid.same_geometry(g));
        if (fmt == FieldFormat::Binary) {
            CHECK(r.values == f.values);
        } else {
            for (std::size_t k = 0; k < g.size(); ++k)
                CHECK(r.values[k] == doctest::Approx(f.values[k]).epsilon(1e-15));
        }
    }
    std::filesystem::remove_all(dir);
}
