#include "seglab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "seglab/kernels.hpp"

namespace seglab {

CompetitionParams CompetitionParams::symmetric(int h, double beta, double lambda, double omega) {
    CompetitionParams p;
    p.h = h;
    p.lambda.assign(h, lambda);
    p.omega.assign(h, omega);
    p.beta = beta;
    p.beta_ij.assign(h, std::vector<double>(h, 1.0));
    for (int i = 0; i < h; ++i) p.beta_ij[i][i] = 0.0;
    return p;
}

void CompetitionParams::validate() const {
    if (h < 1) throw ConfigInvalid("CompetitionParams: need h >= 1");
    if (!(beta > 0.0)) throw ConfigInvalid("CompetitionParams: beta must be positive");
    if (static_cast<int>(lambda.size()) != h || static_cast<int>(omega.size()) != h ||
        static_cast<int>(beta_ij.size()) != h)
        throw ConfigInvalid("CompetitionParams: arity mismatch");
    for (int i = 0; i < h; ++i) {
        if (static_cast<int>(beta_ij[i].size()) != h)
            throw ConfigInvalid("CompetitionParams: beta_ij not square");
        if (beta_ij[i][i] != 0.0) throw ConfigInvalid("CompetitionParams: beta_ij diagonal not 0");
        for (int j = 0; j < h; ++j)
            if (beta_ij[i][j] != beta_ij[j][i])
                throw ConfigInvalid("CompetitionParams: beta_ij not symmetric");
    }
}

BoundarySpec BoundarySpec::zero() {
    BoundarySpec bc;
    bc.mode = Mode::ZeroDirichlet;
    return bc;
}

BoundarySpec BoundarySpec::trace(const Grid2D& grid,
                                 const std::vector<std::function<double(double, double)>>& fns) {
    BoundarySpec bc;
    bc.mode = Mode::TraceDirichlet;
    for (const auto& fn : fns) {
        ScalarField f(grid);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                if (grid.is_boundary(i, j)) f.at(i, j) = fn(grid.x(i), grid.y(j));
        bc.traces.push_back(std::move(f));
    }
    return bc;
}

void BoundarySpec::validate(const Grid2D& grid, int h) const {
    if (mode == Mode::ZeroDirichlet) return;
    if (static_cast<int>(traces.size()) != h)
        throw ConfigInvalid("BoundarySpec: trace count mismatch");
    for (int c = 0; c < h; ++c)
        if (!traces[c].grid.same_geometry(grid))
            throw ConfigInvalid("BoundarySpec: trace grid mismatch");
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (!grid.is_boundary(i, j)) continue;
            int positive = 0;
            for (int c = 0; c < h; ++c) {
                double v = traces[c].at(i, j);
                if (v < 0.0) throw ConfigInvalid("BoundarySpec: negative trace value");
                if (v > 0.0) ++positive;
            }
            if (positive > 1)
                throw ConfigInvalid("BoundarySpec: traces must have disjoint supports");
        }
    }
}

double BoundarySpec::trace_value(int comp, int i, int j) const {
    if (mode == Mode::ZeroDirichlet) return 0.0;
    return traces[comp].at(i, j);
}

namespace {

// Discrete Dirichlet energy (edge-based, matches the 5-point stencil), summed
// with deterministic row partials.
double dirichlet_energy(const std::vector<ScalarField>& u) {
    const Grid2D& g = u[0].grid;
    std::vector<double> rows(g.ny, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        double s = 0.0;
        for (const auto& f : u) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                double d = f.at(i + 1, j) - f.at(i, j);
                s += d * d;
            }
            if (j + 1 < g.ny)
                for (int i = 0; i < g.nx; ++i) {
                    double d = f.at(i, j + 1) - f.at(i, j);
                    s += d * d;
                }
        }
        rows[j] = s;
    }
    double total = 0.0;
    for (double r : rows) total += r;
    return 0.5 * total;
}

struct Stepper {
    bool gp = true;
    const CompetitionParams* params = nullptr;
    const ReactionSpec* reaction = nullptr;  // LV only
    double beta = 0.0;
    const BoundarySpec* bc = nullptr;
    Grid2D grid;
    int h = 0;

    // Competition coefficient entering the implicit operator for component i.
    double comp_coef(const std::vector<ScalarField>& u, int i, std::size_t k) const {
        double s = 0.0;
        if (gp) {
            for (int j = 0; j < h; ++j) {
                if (j == i) continue;
                double v = u[j].values[k];
                s += params->beta_ij[i][j] * v * v;
            }
        } else {
            for (int j = 0; j < h; ++j)
                if (j != i) s += u[j].values[k];
        }
        return beta * s;
    }

    double linear_coef(int i) const { return gp ? params->lambda[i] : 0.0; }

    double explicit_gain(int i, double v) const {
        if (gp) return params->omega[i] * v * v * v;
        return reaction->terms[i].value(v);
    }

    // Interaction potential of the variational functional (without beta).
    double penalty_density(const std::vector<ScalarField>& u, std::size_t k) const {
        double s = 0.0;
        for (int i = 0; i < h; ++i) {
            for (int j = i + 1; j < h; ++j) {
                double a = u[i].values[k], b = u[j].values[k];
                s += gp ? params->beta_ij[i][j] * a * a * b * b : a * b;
            }
        }
        return s;
    }

    double potential_density(const std::vector<ScalarField>& u, std::size_t k) const {
        double s = 0.0;
        for (int i = 0; i < h; ++i) {
            double v = u[i].values[k];
            if (gp)
                s += 0.5 * params->lambda[i] * v * v - 0.25 * params->omega[i] * v * v * v * v;
            else
                s -= reaction->terms[i].antiderivative(v);
        }
        return s;
    }

    double functional(const std::vector<ScalarField>& u) const {
        const double cell = grid.h * grid.h;
        std::size_t n = grid.size();
        std::vector<double> dens(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k)
            dens[k] = potential_density(u, k) +
                      (gp ? 0.5 : 1.0) * beta * penalty_density(u, k);
        return dirichlet_energy(u) + kernels::det_sum(dens) * cell;
    }

    double raw_overlap(const std::vector<ScalarField>& u) const {
        const double cell = grid.h * grid.h;
        std::size_t n = grid.size();
        std::vector<double> dens(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k)
            dens[k] = penalty_density(u, k);
        return kernels::det_sum(dens) * cell;
    }

    // Max-norm defect of the steady elliptic system at interior nodes.
    double defect(const std::vector<ScalarField>& u) const {
        const double inv_h2 = 1.0 / (grid.h * grid.h);
        std::vector<double> rows(grid.ny, 0.0);
#pragma omp parallel for schedule(static)
        for (int j = 1; j < grid.ny - 1; ++j) {
            double worst = 0.0;
            for (int i = 1; i < grid.nx - 1; ++i) {
                std::size_t k = grid.idx(i, j);
                for (int c = 0; c < h; ++c) {
                    const auto& v = u[c].values;
                    double lap = (v[k + 1] + v[k - 1] + v[k + grid.nx] + v[k - grid.nx] -
                                  4.0 * v[k]) * inv_h2;
                    double d = -lap + linear_coef(c) * v[k] - explicit_gain(c, v[k]) +
                               comp_coef(u, c, k) * v[k];
                    worst = std::max(worst, std::abs(d));
                }
            }
            rows[j] = worst;
        }
        double worst = 0.0;
        for (double r : rows) worst = std::max(worst, r);
        return worst;
    }
};

std::vector<ScalarField> initial_state(const Stepper& st, const SolveOptions& opts,
                                       const std::optional<std::vector<ScalarField>>& init) {
    const Grid2D& g = st.grid;
    std::vector<ScalarField> u;
    if (init) {
        if (static_cast<int>(init->size()) != st.h)
            throw ConfigInvalid("initial state arity mismatch");
        u = *init;
        for (auto& f : u)
            if (!f.grid.same_geometry(g)) throw ConfigInvalid("initial state grid mismatch");
        return u;
    }
    u.assign(st.h, ScalarField(g));
    if (opts.random_init) {
        std::mt19937 rng(opts.seed);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        for (int c = 0; c < st.h; ++c)
            for (int j = 1; j < g.ny - 1; ++j)
                for (int i = 1; i < g.nx - 1; ++i) u[c].at(i, j) = d(rng);
    }
    // impose traces and harmonically extend them when not starting random
    kernels::StencilOp A;
    A.resize(g.nx, g.ny);
    const double c5 = 1.0;
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            std::size_t k = g.idx(i, j);
            A.active[k] = 1;
            A.diag[k] = 4.0 * c5;
            A.cE[k] = A.cW[k] = A.cN[k] = A.cS[k] = c5;
        }
    }
    std::vector<double> rhs(g.size(), 0.0);
    for (int c = 0; c < st.h; ++c) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.is_boundary(i, j)) u[c].at(i, j) = st.bc->trace_value(c, i, j);
        if (!opts.random_init && st.bc->mode == BoundarySpec::Mode::TraceDirichlet)
            kernels::rb_solve(A, u[c].values, rhs, 1.8, 1e-12, 20000);
    }
    return u;
}

SolveResult run_relaxation(Stepper st, const std::optional<std::vector<ScalarField>>& init,
                           const SolveOptions& opts) {
    const Grid2D& g = st.grid;
    const std::size_t n = g.size();
    std::vector<ScalarField> u = initial_state(st, opts, init);

    double sup0 = 1.0;
    for (const auto& f : u) sup0 = std::max(sup0, f.max_abs());
    const double blowup_cap = opts.blowup_factor * sup0;

    SolveReport rep;
    double dt = opts.dt0;
    double J = st.functional(u);
    kernels::StencilOp A;
    A.resize(g.nx, g.ny);
    std::vector<double> rhs(n);
    std::vector<ScalarField> next = u;

    int consecutive_ok = 0;
    for (rep.iterations = 0; rep.iterations < opts.max_iters; ++rep.iterations) {
        double d = st.defect(u);
        rep.final_defect = d;
        if (d <= opts.tol) {
            rep.converged = true;
            break;
        }
        const double a = dt / (g.h * g.h);
        double clipped = 0.0;
        for (int c = 0; c < st.h; ++c) {
            for (int j = 1; j < g.ny - 1; ++j) {
                for (int i = 1; i < g.nx - 1; ++i) {
                    std::size_t k = g.idx(i, j);
                    A.active[k] = 1;
                    A.diag[k] = 1.0 + dt * (st.linear_coef(c) + st.comp_coef(u, c, k)) + 4.0 * a;
                    A.cE[k] = A.cW[k] = A.cN[k] = A.cS[k] = a;
                    rhs[k] = u[c].values[k] + dt * st.explicit_gain(c, u[c].values[k]);
                }
            }
            next[c] = u[c];  // keeps boundary values; warm start
            kernels::rb_solve(A, next[c].values, rhs, 1.0, opts.inner_tol,
                              opts.inner_max_sweeps);
            for (int j = 1; j < g.ny - 1; ++j)
                for (int i = 1; i < g.nx - 1; ++i) {
                    double& v = next[c].at(i, j);
                    if (v < 0.0) {
                        clipped -= v;
                        v = 0.0;
                    }
                }
        }
        double Jn = st.functional(next);
        if (Jn > J * (1.0 + 1e-8) + 1e-14) {
            dt *= 0.5;
            ++rep.dt_halvings;
            consecutive_ok = 0;
            if (dt < opts.dt0 * std::pow(0.5, 45))
                throw NoConvergence("time step collapsed while enforcing energy descent");
            continue;  // state unchanged, retry with smaller dt
        }
        u.swap(next);
        J = Jn;
        rep.clipped_mass += clipped * g.h * g.h;
        for (const auto& f : u)
            if (f.max_abs() > blowup_cap) throw Blowup("solution exceeded 10x initial sup-norm");
        if (++consecutive_ok >= 10 && dt < opts.dt0 * 8.0) {
            dt *= 1.25;
            consecutive_ok = 0;
        }
    }
    if (!rep.converged)
        throw NoConvergence("relaxation did not reach tol within max_iters (defect=" +
                            std::to_string(rep.final_defect) + ")");
    rep.dt_final = dt;
    rep.energy = J;
    rep.raw_overlap = st.raw_overlap(u);
    rep.overlap = st.beta * rep.raw_overlap;

    ReactionSpec spec(st.h);
    if (st.gp) {
        for (int c = 0; c < st.h; ++c)
            spec[c] = ReactionTerm::cubic(st.params->omega[c], st.params->lambda[c]);
    } else {
        spec = *st.reaction;
    }
    return SolveResult{SegregatedConfig(std::move(u), std::move(spec)), rep};
}

} // namespace

SolveResult solve_gp(const CompetitionParams& params, const BoundarySpec& bc, const Grid2D& grid,
                     const std::optional<std::vector<ScalarField>>& init,
                     const SolveOptions& opts) {
    params.validate();
    bc.validate(grid, params.h);
    if (bc.mode == BoundarySpec::Mode::ZeroDirichlet)
        for (int i = 0; i < params.h; ++i)
            if (params.omega[i] <= 0.0 && params.lambda[i] >= 0.0)
                throw ConfigInvalid(
                    "solve_gp: zero-Dirichlet with omega<=0, lambda>=0 reaches only the trivial "
                    "solution; use trace-Dirichlet data");
    Stepper st;
    st.gp = true;
    st.params = &params;
    st.beta = params.beta;
    st.bc = &bc;
    st.grid = grid;
    st.h = params.h;
    return run_relaxation(st, init, opts);
}

SolveResult solve_lv(const ReactionSpec& f_spec, double beta, const BoundarySpec& bc,
                     const Grid2D& grid, const std::optional<std::vector<ScalarField>>& init,
                     const SolveOptions& opts) {
    if (bc.mode != BoundarySpec::Mode::TraceDirichlet)
        throw ConfigInvalid("solve_lv: trace-Dirichlet data required");
    const int h = static_cast<int>(f_spec.size());
    bc.validate(grid, h);
    if (!(beta > 0.0)) throw ConfigInvalid("solve_lv: beta must be positive");
    Stepper st;
    st.gp = false;
    st.reaction = &f_spec;
    st.beta = beta;
    st.bc = &bc;
    st.grid = grid;
    st.h = h;
    return run_relaxation(st, init, opts);
}

ContinuationResult beta_continuation(bool kind_gp, const CompetitionParams& gp_params,
                                     const ReactionSpec& lv_reaction,
                                     const std::vector<double>& beta_ladder,
                                     const BoundarySpec& bc, const Grid2D& grid,
                                     const SolveOptions& opts) {
    if (beta_ladder.empty()) throw ConfigInvalid("beta_continuation: empty ladder");
    for (std::size_t k = 1; k < beta_ladder.size(); ++k)
        if (!(beta_ladder[k] > beta_ladder[k - 1]))
            throw ConfigInvalid("beta_continuation: ladder must increase");

    ContinuationResult out;
    std::optional<std::vector<ScalarField>> warm;
    for (double beta : beta_ladder) {
        try {
            SolveResult res =
                kind_gp ? [&] {
                    CompetitionParams p = gp_params;
                    p.beta = beta;
                    return solve_gp(p, bc, grid, warm, opts);
                }()
                        : solve_lv(lv_reaction, beta, bc, grid, warm, opts);
            warm = res.config.components();
            out.overlaps.push_back(res.report.raw_overlap);
            out.stages.push_back(std::move(res));
        } catch (const Error& e) {
            throw NoConvergence("beta_continuation failed at beta=" + std::to_string(beta) +
                                ": " + e.what());
        }
    }
    out.final_eps_seg = out.stages.back().config.validate().eps_seg;
    return out;
}

SegregatedConfig make_prototype(int m, const Grid2D& grid, const std::vector<int>& assignment) {
    if (m < 2) throw BadAssignment("make_prototype: m must be >= 2");
    std::vector<int> assign = assignment;
    if (assign.empty()) {
        assign.resize(m);
        for (int k = 0; k < m; ++k) assign[k] = k;
    }
    if (static_cast<int>(assign.size()) != m)
        throw BadAssignment("make_prototype: assignment must cover all m sectors");
    int n_comp = 0;
    for (int k = 0; k < m; ++k) {
        if (assign[k] < 0) throw BadAssignment("make_prototype: negative component index");
        n_comp = std::max(n_comp, assign[k] + 1);
        if (assign[k] == assign[(k + 1) % m])
            throw BadAssignment("make_prototype: adjacent sectors share a component");
    }

    std::vector<ScalarField> comps(n_comp, ScalarField(grid));
    const double half_m = 0.5 * m;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            const double r = std::hypot(x, y);
            if (r == 0.0) continue;
            const double th = std::atan2(y, x);
            int sector = static_cast<int>(std::floor(m * th / (2.0 * M_PI) + 0.5));
            sector = ((sector % m) + m) % m;
            const double v = std::pow(r, half_m) * std::abs(std::cos(half_m * th));
            comps[assign[sector]].at(i, j) = v;
        }
    }
    return SegregatedConfig(std::move(comps), ReactionSpec::zero(n_comp));
}

ClassSReport class_s_check(const SegregatedConfig& U) {
    const Grid2D& g = U.grid();
    const int h = U.h_components();
    const double inv_h2 = 1.0 / (g.h * g.h);
    ClassSReport rep;

    std::vector<ScalarField> res_sub(h, ScalarField(g));
    std::vector<ScalarField> res_super(h, ScalarField(g));
    for (int c = 0; c < h; ++c) {
#pragma omp parallel for schedule(static)
        for (int j = 1; j < g.ny - 1; ++j) {
            for (int i = 1; i < g.nx - 1; ++i) {
                std::size_t k = g.idx(i, j);
                double lap_u = 0.0, lap_w = 0.0, f_u = 0.0, f_sum = 0.0;
                for (int d = 0; d < h; ++d) {
                    const auto& v = U.component(d).values;
                    double lap = (v[k + 1] + v[k - 1] + v[k + g.nx] + v[k - g.nx] - 4.0 * v[k]) *
                                 inv_h2;
                    double fv = U.reaction_value(d).values[k];
                    if (d == c) {
                        lap_u = lap;
                        f_u = fv;
                        lap_w += lap;
                    } else {
                        lap_w -= lap;
                        f_sum += fv;
                    }
                }
                res_sub[c].at(i, j) = -lap_u - f_u;              // want <= 0
                res_super[c].at(i, j) = -lap_w - (f_u - f_sum);  // want >= 0
            }
        }
    }

    // 3x3 nonnegative mollifier [1 2 1; 2 4 2; 1 2 1]/16
    auto mollified_max = [&](const ScalarField& f, double sign) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int j = 2; j < g.ny - 2; ++j) {
            for (int i = 2; i < g.nx - 2; ++i) {
                double s = 4.0 * f.at(i, j) +
                           2.0 * (f.at(i + 1, j) + f.at(i - 1, j) + f.at(i, j + 1) +
                                  f.at(i, j - 1)) +
                           f.at(i + 1, j + 1) + f.at(i - 1, j + 1) + f.at(i + 1, j - 1) +
                           f.at(i - 1, j - 1);
                worst = std::max(worst, sign * s / 16.0);
            }
        }
        return worst;
    };
    for (int c = 0; c < h; ++c) {
        rep.subsolution_violation = std::max(rep.subsolution_violation,
                                             mollified_max(res_sub[c], 1.0));
        rep.supersolution_violation = std::max(rep.supersolution_violation,
                                               mollified_max(res_super[c], -1.0));
    }
    return rep;
}

} // namespace seglab
