#include <doctest.h>

#include <random>

#include "seglab/kernels.hpp"

using namespace seglab;

namespace {

kernels::StencilOp poisson_op(int nx, int ny, double h) {
    kernels::StencilOp A;
    A.resize(nx, ny);
    const double c = 1.0 / (h * h);
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * nx + i;
            A.active[k] = 1;
            A.diag[k] = 4.0 * c;
            A.cE[k] = A.cW[k] = A.cN[k] = A.cS[k] = c;
        }
    }
    return A;
}

std::vector<double> random_vec(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

} // namespace

TEST_CASE("parallel kernels match the serial reference bitwise") {
    const int nx = 67, ny = 53;
    auto A = poisson_op(nx, ny, 1.0 / 64);
    auto u = random_vec(static_cast<std::size_t>(nx) * ny, 7);
    auto rhs = random_vec(u.size(), 11);

    std::vector<double> out_s, out_p;
    kernels::serial::apply(A, u, out_s);
    kernels::par::apply(A, u, out_p);
    CHECK(out_s == out_p);

    kernels::serial::residual(A, u, rhs, out_s);
    kernels::par::residual(A, u, rhs, out_p);
    CHECK(out_s == out_p);

    auto us = u, up = u;
    for (int s = 0; s < 5; ++s) {
        kernels::serial::rb_sweep(A, us, rhs, 1.3);
        kernels::par::rb_sweep(A, up, rhs, 1.3);
    }
    CHECK(us == up);

    CHECK(kernels::serial::det_sum(u.data(), u.size()) ==
          kernels::par::det_sum(u.data(), u.size()));
    CHECK(kernels::serial::det_dot(u.data(), rhs.data(), u.size()) ==
          kernels::par::det_dot(u.data(), rhs.data(), u.size()));
    CHECK(kernels::serial::max_abs(u.data(), u.size()) ==
          kernels::par::max_abs(u.data(), u.size()));
}

TEST_CASE("rb_solve reaches the requested residual") {
    const int nx = 33, ny = 33;
    const double h = 1.0 / 32;
    auto A = poisson_op(nx, ny, h);
    std::vector<double> rhs(static_cast<std::size_t>(nx) * ny, 1.0);
    std::vector<double> u(rhs.size(), 0.0);
    kernels::rb_solve(A, u, rhs, 1.5, 1e-10, 20000);
    std::vector<double> res;
    kernels::residual(A, u, rhs, res);
    CHECK(kernels::max_abs(res) <= 1e-10 * kernels::max_abs(rhs) * 1.0001);
    // interior solution of -Laplace u = 1 on the unit square peaks near 0.0736
    double umax = kernels::max_abs(u);
    CHECK(umax == doctest::Approx(0.0736).epsilon(0.02));
}
