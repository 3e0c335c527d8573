#include "seglab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace seglab::kernels {

namespace {

inline double apply_row(const StencilOp& A, const std::vector<double>& u, std::size_t k) {
    double s = A.diag[k] * u[k];
    if (A.cE[k] != 0.0) s -= A.cE[k] * u[k + 1];
    if (A.cW[k] != 0.0) s -= A.cW[k] * u[k - 1];
    if (A.cN[k] != 0.0) s -= A.cN[k] * u[k + A.nx];
    if (A.cS[k] != 0.0) s -= A.cS[k] * u[k - A.nx];
    return s;
}

inline void sweep_color(const StencilOp& A, std::vector<double>& u,
                        const std::vector<double>& rhs, double omega, int color,
                        bool parallel) {
    const int nx = A.nx, ny = A.ny;
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < ny; ++j) {
        int istart = (color + j) % 2;
        std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = istart; i < nx; i += 2) {
            std::size_t k = row + i;
            if (!A.active[k]) continue;
            double s = rhs[k];
            if (A.cE[k] != 0.0) s += A.cE[k] * u[k + 1];
            if (A.cW[k] != 0.0) s += A.cW[k] * u[k - 1];
            if (A.cN[k] != 0.0) s += A.cN[k] * u[k + nx];
            if (A.cS[k] != 0.0) s += A.cS[k] * u[k - nx];
            double unew = s / A.diag[k];
            u[k] = u[k] + omega * (unew - u[k]);
        }
    }
}

// Chunked reductions: partials are accumulated serially inside fixed chunks
// and combined in chunk order, so the result does not depend on the thread
// count and matches the serial variant bitwise.
template <class ChunkFn>
double chunked_reduce(std::size_t n, bool parallel, ChunkFn&& chunk_fn) {
    if (n == 0) return 0.0;
    std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
        std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
        std::size_t hi = std::min(lo + kReduceChunk, n);
        partial[c] = chunk_fn(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void apply_impl(const StencilOp& A, const std::vector<double>& u, std::vector<double>& out,
                bool parallel) {
    out.resize(u.size());
    const int ny = A.ny, nx = A.nx;
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < ny; ++j) {
        std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            std::size_t k = row + i;
            out[k] = A.active[k] ? apply_row(A, u, k) : 0.0;
        }
    }
}

void residual_impl(const StencilOp& A, const std::vector<double>& u,
                   const std::vector<double>& rhs, std::vector<double>& out, bool parallel) {
    out.resize(u.size());
    const int ny = A.ny, nx = A.nx;
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < ny; ++j) {
        std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            std::size_t k = row + i;
            out[k] = A.active[k] ? rhs[k] - apply_row(A, u, k) : 0.0;
        }
    }
}

double max_abs_impl(const double* v, std::size_t n, bool parallel) {
    if (n == 0) return 0.0;
    std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
        std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
        std::size_t hi = std::min(lo + kReduceChunk, n);
        double m = 0.0;
        for (std::size_t k = lo; k < hi; ++k) m = std::max(m, std::abs(v[k]));
        partial[c] = m;
    }
    double m = 0.0;
    for (double p : partial) m = std::max(m, p);
    return m;
}

} // namespace

namespace serial {

void apply(const StencilOp& A, const std::vector<double>& u, std::vector<double>& out) {
    apply_impl(A, u, out, false);
}
void residual(const StencilOp& A, const std::vector<double>& u,
              const std::vector<double>& rhs, std::vector<double>& out) {
    residual_impl(A, u, rhs, out, false);
}
void rb_sweep(const StencilOp& A, std::vector<double>& u,
              const std::vector<double>& rhs, double omega) {
    sweep_color(A, u, rhs, omega, 0, false);
    sweep_color(A, u, rhs, omega, 1, false);
}
double det_sum(const double* v, std::size_t n) {
    return chunked_reduce(n, false, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += v[k];
        return s;
    });
}
double det_dot(const double* a, const double* b, std::size_t n) {
    return chunked_reduce(n, false, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += a[k] * b[k];
        return s;
    });
}
double max_abs(const double* v, std::size_t n) { return max_abs_impl(v, n, false); }

} // namespace serial

namespace par {

void apply(const StencilOp& A, const std::vector<double>& u, std::vector<double>& out) {
    apply_impl(A, u, out, true);
}
void residual(const StencilOp& A, const std::vector<double>& u,
              const std::vector<double>& rhs, std::vector<double>& out) {
    residual_impl(A, u, rhs, out, true);
}
void rb_sweep(const StencilOp& A, std::vector<double>& u,
              const std::vector<double>& rhs, double omega) {
    sweep_color(A, u, rhs, omega, 0, true);
    sweep_color(A, u, rhs, omega, 1, true);
}
double det_sum(const double* v, std::size_t n) {
    return chunked_reduce(n, true, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += v[k];
        return s;
    });
}
double det_dot(const double* a, const double* b, std::size_t n) {
    return chunked_reduce(n, true, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += a[k] * b[k];
        return s;
    });
}
double max_abs(const double* v, std::size_t n) { return max_abs_impl(v, n, true); }

} // namespace par

int rb_solve(const StencilOp& A, std::vector<double>& u, const std::vector<double>& rhs,
             double omega, double rel_tol, int max_sweeps) {
    std::vector<double> res;
    double rhs_scale = par::max_abs(rhs.data(), rhs.size());
    if (rhs_scale == 0.0) rhs_scale = 1.0;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        par::rb_sweep(A, u, rhs, omega);
        if (sweep % 8 == 7 || sweep == max_sweeps - 1) {
            par::residual(A, u, rhs, res);
            if (par::max_abs(res.data(), res.size()) <= rel_tol * rhs_scale) {
                ++sweep;
                break;
            }
        }
    }
    return sweep;
}

} // namespace seglab::kernels
