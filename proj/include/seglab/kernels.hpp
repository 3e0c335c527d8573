// Hot inner loops: stencil application, red-black sweeps, chunked reductions.
//
// Every kernel exists twice: kernels::serial is the reference implementation,
// kernels::par the OpenMP one. The two must produce bit-identical results for
// any thread count: sweeps update colors pointwise and the reductions combine
// fixed-size chunk partials in a fixed order.
#pragma once
#include <cstdint>
#include <vector>

namespace seglab::kernels {

// Generic 5-point operator on an nx*ny node lattice:
//   (A u)_k = diag[k]*u[k] - cE[k]*u[k+1] - cW[k]*u[k-1] - cN[k]*u[k+nx] - cS[k]*u[k-nx]
// Nodes with active[k] == 0 are Dirichlet-fixed: sweeps leave them alone and
// apply() reports a zero residual row for them.
struct StencilOp {
    int nx = 0;
    int ny = 0;
    std::vector<double> diag, cE, cW, cN, cS;
    std::vector<std::uint8_t> active;

    void resize(int nx_, int ny_) {
        nx = nx_;
        ny = ny_;
        std::size_t n = static_cast<std::size_t>(nx) * ny;
        diag.assign(n, 1.0);
        cE.assign(n, 0.0);
        cW.assign(n, 0.0);
        cN.assign(n, 0.0);
        cS.assign(n, 0.0);
        active.assign(n, 0);
    }
};

inline constexpr std::size_t kReduceChunk = 4096;

namespace serial {

void apply(const StencilOp& A, const std::vector<double>& u, std::vector<double>& out);
void residual(const StencilOp& A, const std::vector<double>& u,
              const std::vector<double>& rhs, std::vector<double>& out);
// One red-black SOR pass (both colors); omega = 1 gives Gauss-Seidel.
void rb_sweep(const StencilOp& A, std::vector<double>& u,
              const std::vector<double>& rhs, double omega);
double det_sum(const double* v, std::size_t n);
double det_dot(const double* a, const double* b, std::size_t n);
double max_abs(const double* v, std::size_t n);

} // namespace serial

namespace par {

void apply(const StencilOp& A, const std::vector<double>& u, std::vector<double>& out);
void residual(const StencilOp& A, const std::vector<double>& u,
              const std::vector<double>& rhs, std::vector<double>& out);
void rb_sweep(const StencilOp& A, std::vector<double>& u,
              const std::vector<double>& rhs, double omega);
double det_sum(const double* v, std::size_t n);
double det_dot(const double* a, const double* b, std::size_t n);
double max_abs(const double* v, std::size_t n);

} // namespace par

// Default dispatch used by the library.
inline void apply(const StencilOp& A, const std::vector<double>& u, std::vector<double>& out) {
    par::apply(A, u, out);
}
inline void residual(const StencilOp& A, const std::vector<double>& u,
                     const std::vector<double>& rhs, std::vector<double>& out) {
    par::residual(A, u, rhs, out);
}
inline void rb_sweep(const StencilOp& A, std::vector<double>& u,
                     const std::vector<double>& rhs, double omega) {
    par::rb_sweep(A, u, rhs, omega);
}
inline double det_sum(const std::vector<double>& v) {
    return par::det_sum(v.data(), v.size());
}
inline double det_dot(const std::vector<double>& a, const std::vector<double>& b) {
    return par::det_dot(a.data(), b.data(), a.size());
}
inline double max_abs(const std::vector<double>& v) {
    return par::max_abs(v.data(), v.size());
}

// Solves A u = rhs by red-black SOR sweeps. Returns the sweep count; throws
// nothing (caller checks the residual when it matters).
int rb_solve(const StencilOp& A, std::vector<double>& u, const std::vector<double>& rhs,
             double omega, double rel_tol, int max_sweeps);

} // namespace seglab::kernels
