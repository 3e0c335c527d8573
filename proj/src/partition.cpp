#include "seglab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "seglab/kernels.hpp"

namespace seglab {

std::size_t RegionMask::interior_count() const {
    std::size_t n = 0;
    for (auto b : inside) n += b;
    return n;
}

RegionMask RegionMask::full_interior(const Grid2D& grid) {
    RegionMask m;
    m.grid = grid;
    m.inside.assign(grid.size(), 0);
    m.tE.assign(grid.size(), 1.0);
    m.tW.assign(grid.size(), 1.0);
    m.tN.assign(grid.size(), 1.0);
    m.tS.assign(grid.size(), 1.0);
    for (int j = 1; j < grid.ny - 1; ++j)
        for (int i = 1; i < grid.nx - 1; ++i) m.inside[grid.idx(i, j)] = 1;
    return m;
}

RegionMask RegionMask::from_sdf(const Grid2D& grid,
                                const std::function<double(double, double)>& sdf) {
    RegionMask m = full_interior(grid);
    for (int j = 1; j < grid.ny - 1; ++j)
        for (int i = 1; i < grid.nx - 1; ++i)
            if (sdf(grid.x(i), grid.y(j)) >= 0.0) m.inside[grid.idx(i, j)] = 0;
    // boundary ring is outside by construction
    auto cut = [&](Point a, Point b) {
        // fraction along a->b where the sdf changes sign (a inside)
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            Point p{a.x + (b.x - a.x) * mid, a.y + (b.y - a.y) * mid};
            if (sdf(p.x, p.y) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return std::max(0.5 * (lo + hi), 1e-6);
    };
    for (int j = 1; j < grid.ny - 1; ++j) {
        for (int i = 1; i < grid.nx - 1; ++i) {
            std::size_t k = grid.idx(i, j);
            if (!m.inside[k]) continue;
            Point a = grid.node(i, j);
            if (!m.inside[k + 1] || i + 1 == grid.nx - 1)
                if (sdf(grid.x(i + 1), grid.y(j)) >= 0.0) m.tE[k] = cut(a, grid.node(i + 1, j));
            if (!m.inside[k - 1] || i - 1 == 0)
                if (sdf(grid.x(i - 1), grid.y(j)) >= 0.0) m.tW[k] = cut(a, grid.node(i - 1, j));
            if (!m.inside[k + grid.nx] || j + 1 == grid.ny - 1)
                if (sdf(grid.x(i), grid.y(j + 1)) >= 0.0) m.tN[k] = cut(a, grid.node(i, j + 1));
            if (!m.inside[k - grid.nx] || j - 1 == 0)
                if (sdf(grid.x(i), grid.y(j - 1)) >= 0.0) m.tS[k] = cut(a, grid.node(i, j - 1));
        }
    }
    return m;
}

RegionMask RegionMask::from_labels(const RegionMask& parent, const std::vector<int>& labels,
                                   int target) {
    const Grid2D& grid = parent.grid;
    RegionMask m;
    m.grid = grid;
    m.inside.assign(grid.size(), 0);
    m.tE = parent.tE;
    m.tW = parent.tW;
    m.tN = parent.tN;
    m.tS = parent.tS;
    for (std::size_t k = 0; k < grid.size(); ++k)
        m.inside[k] = parent.inside[k] && labels[k] == target;
    for (int j = 1; j < grid.ny - 1; ++j) {
        for (int i = 1; i < grid.nx - 1; ++i) {
            std::size_t k = grid.idx(i, j);
            if (!m.inside[k]) continue;
            // label changes inside the parent sit halfway between nodes
            if (!m.inside[k + 1] && parent.inside[k + 1]) m.tE[k] = 0.5;
            if (!m.inside[k - 1] && parent.inside[k - 1]) m.tW[k] = 0.5;
            if (!m.inside[k + grid.nx] && parent.inside[k + grid.nx]) m.tN[k] = 0.5;
            if (!m.inside[k - grid.nx] && parent.inside[k - grid.nx]) m.tS[k] = 0.5;
        }
    }
    return m;
}

namespace {

// Shortley-Weller 5-point operator for -Laplace on the masked region, with an
// optional nonnegative diagonal addition.
kernels::StencilOp build_operator(const RegionMask& m, const std::vector<double>* diag_add) {
    const Grid2D& g = m.grid;
    kernels::StencilOp A;
    A.resize(g.nx, g.ny);
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            std::size_t k = g.idx(i, j);
            if (!m.inside[k]) continue;
            A.active[k] = 1;
            const double tE = m.tE[k], tW = m.tW[k], tN = m.tN[k], tS = m.tS[k];
            A.diag[k] = 2.0 * inv_h2 * (1.0 / (tE * tW) + 1.0 / (tN * tS));
            if (diag_add) A.diag[k] += (*diag_add)[k];
            if (m.inside[k + 1]) A.cE[k] = 2.0 * inv_h2 / (tE * (tE + tW));
            if (m.inside[k - 1]) A.cW[k] = 2.0 * inv_h2 / (tW * (tE + tW));
            if (m.inside[k + g.nx]) A.cN[k] = 2.0 * inv_h2 / (tN * (tN + tS));
            if (m.inside[k - g.nx]) A.cS[k] = 2.0 * inv_h2 / (tS * (tN + tS));
        }
    }
    return A;
}

double l2_norm(const Grid2D& g, const std::vector<double>& v) {
    return std::sqrt(kernels::par::det_dot(v.data(), v.data(), v.size())) * g.h;
}

double rayleigh(const kernels::StencilOp& A, const std::vector<double>& u) {
    std::vector<double> Au;
    kernels::apply(A, u, Au);
    double num = kernels::par::det_dot(Au.data(), u.data(), u.size());
    double den = kernels::par::det_dot(u.data(), u.data(), u.size());
    return num / den;
}

} // namespace

EigenResult lambda1(const RegionMask& region) {
    if (region.interior_count() < 9)
        throw EmptyRegion("lambda1: region has fewer than 9 interior nodes");
    const Grid2D& g = region.grid;
    kernels::StencilOp A = build_operator(region, nullptr);

    std::vector<double> u(g.size(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (region.inside[k]) u[k] = 1.0;
    double nrm = l2_norm(g, u);
    for (auto& v : u) v /= nrm;

    EigenResult res;
    double lam_prev = 0.0;
    bool settled = false;
    std::vector<double> v = u;
    for (res.iterations = 1; res.iterations <= 400; ++res.iterations) {
        kernels::rb_solve(A, v, u, 1.6, 1e-10, 20000);
        double nv = l2_norm(g, v);
        if (!(nv > 0.0) || !std::isfinite(nv)) throw NoConvergence("lambda1: iterate degenerated");
        for (std::size_t k = 0; k < v.size(); ++k) v[k] /= nv;
        u = v;
        double lam = rayleigh(A, u);
        if (res.iterations > 2 && std::abs(lam - lam_prev) <= 1e-8 * std::abs(lam)) {
            lam_prev = lam;
            settled = true;
            break;
        }
        lam_prev = lam;
    }
    if (!settled) throw NoConvergence("lambda1: Rayleigh quotient did not settle");

    res.lambda = lam_prev;
    res.eigenfunction = ScalarField(g);
    double sgn = 0.0;
    for (double w : u) sgn += w;
    const double flip = sgn < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < u.size(); ++k) res.eigenfunction.values[k] = flip * u[k];
    return res;
}

double partition_objective(const std::vector<double>& lambdas, double p) {
    if (lambdas.empty()) throw Error("partition_objective: no eigenvalues");
    if (std::isinf(p)) return *std::max_element(lambdas.begin(), lambdas.end());
    double s = 0.0;
    for (double l : lambdas) s += std::pow(l, p);
    return std::pow(s / lambdas.size(), 1.0 / p);
}

namespace {

struct RelaxState {
    std::vector<std::vector<double>> u;  // per component
    std::vector<double> lambda;          // penalized Rayleigh quotients
};

// One multi-start-free relaxation over the beta ladder. Throws DegenerateSeed
// when a component collapses.
RelaxState relax_one(int h, double p, const RegionMask& domain,
                     const std::vector<double>& beta_ladder, unsigned seed,
                     const PartitionOptions& opts, std::vector<double>* stage_objectives) {
    const Grid2D& g = domain.grid;
    const std::size_t n = g.size();
    RelaxState st;
    st.u.assign(h, std::vector<double>(n, 0.0));
    st.lambda.assign(h, 0.0);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    for (int c = 0; c < h; ++c) {
        for (std::size_t k = 0; k < n; ++k)
            if (domain.inside[k]) st.u[c][k] = unif(rng);
        // a few averaging passes to smooth the noise (deterministic)
        std::vector<double> tmp(n, 0.0);
        for (int pass = 0; pass < 4; ++pass) {
            for (int j = 1; j < g.ny - 1; ++j) {
                for (int i = 1; i < g.nx - 1; ++i) {
                    std::size_t k = g.idx(i, j);
                    if (!domain.inside[k]) continue;
                    tmp[k] = 0.2 * (st.u[c][k] + st.u[c][k + 1] + st.u[c][k - 1] +
                                    st.u[c][k + g.nx] + st.u[c][k - g.nx]);
                }
            }
            std::swap(tmp, st.u[c]);
        }
        double nrm = l2_norm(g, st.u[c]);
        if (!(nrm > 0.0)) throw DegenerateSeed("empty random start");
        for (auto& v : st.u[c]) v /= nrm;
    }

    std::vector<double> diag_add(n), weights(h, 1.0);
    std::vector<double> v;
    for (double beta : beta_ladder) {
        double prev_obj = std::numeric_limits<double>::infinity();
        int settled = 0;
        for (int it = 0; it < opts.max_outer; ++it) {
            // p-dependent weights, normalized to mean one
            if (std::isinf(p)) {
                double lmax = *std::max_element(st.lambda.begin(), st.lambda.end());
                double T = std::max(0.02, 0.5 * std::pow(0.85, it)) * std::max(lmax, 1.0);
                double sum = 0.0;
                for (int c = 0; c < h; ++c) {
                    weights[c] = std::exp((st.lambda[c] - lmax) / T);
                    sum += weights[c];
                }
                for (int c = 0; c < h; ++c) weights[c] *= h / sum;
            } else if (it > 0) {
                double sum = 0.0;
                for (int c = 0; c < h; ++c) {
                    weights[c] = std::pow(std::max(st.lambda[c], 1e-12), p - 1.0);
                    sum += weights[c];
                }
                for (int c = 0; c < h; ++c) weights[c] *= h / sum;
            }

            for (int c = 0; c < h; ++c) {
                for (std::size_t k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int d = 0; d < h; ++d) {
                        if (d == c) continue;
                        s += weights[d] * st.u[d][k] * st.u[d][k];
                    }
                    diag_add[k] = beta * s;
                }
                kernels::StencilOp A = build_operator(domain, &diag_add);
                v = st.u[c];
                kernels::rb_solve(A, v, st.u[c], opts.sor_omega, opts.inner_tol,
                                  opts.inner_max_sweeps);
                double nv = l2_norm(g, v);
                if (!(nv > 1e-14) || !std::isfinite(nv))
                    throw DegenerateSeed("component collapsed during relaxation");
                for (auto& w : v) w /= nv;
                st.u[c] = v;
                st.lambda[c] = rayleigh(A, st.u[c]);
                if (!std::isfinite(st.lambda[c]))
                    throw DegenerateSeed("penalized Rayleigh quotient degenerated");
            }
            double obj = partition_objective(st.lambda, p);
            if (std::abs(prev_obj - obj) <= opts.outer_tol * std::max(obj, 1.0)) {
                if (++settled >= 3) {
                    prev_obj = obj;
                    break;
                }
            } else {
                settled = 0;
            }
            prev_obj = obj;
        }
        if (stage_objectives) stage_objectives->push_back(prev_obj);
    }
    return st;
}

} // namespace

Partition optimize_partition(int h, double p, const RegionMask& domain,
                             const std::vector<double>& beta_ladder, unsigned seed,
                             const PartitionOptions& opts) {
    if (h < 1) throw ConfigInvalid("optimize_partition: h must be >= 1");
    if (beta_ladder.empty()) throw ConfigInvalid("optimize_partition: empty beta ladder");
    if (!(p >= 1.0)) throw ConfigInvalid("optimize_partition: p must be >= 1");
    const Grid2D& g = domain.grid;

    Partition best;
    bool have_best = false;
    int restarts = 0;

    for (int start = 0; start < opts.starts; ++start) {
        unsigned s = seed + static_cast<unsigned>(start);
        std::vector<double> stage_obj;
        RelaxState st;
        bool ok = false;
        for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
            try {
                stage_obj.clear();
                st = relax_one(h, p, domain, beta_ladder, s + 1000u * attempt, opts, &stage_obj);
                ok = true;
            } catch (const DegenerateSeed&) {
                ++restarts;
            }
        }
        if (!ok) continue;

        Partition cand;
        cand.grid = g;
        cand.p = p;
        cand.seed_used = s;
        cand.stage_objectives = stage_obj;
        cand.relaxed_lambdas = st.lambda;
        cand.labels.assign(g.size(), 0);
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!domain.inside[k]) continue;
            int who = 0;
            double bestv = 0.0;
            for (int c = 0; c < h; ++c) {
                if (st.u[c][k] > bestv) {
                    bestv = st.u[c][k];
                    who = c + 1;
                }
            }
            cand.labels[k] = who;
        }
        bool degenerate = false;
        for (int c = 1; c <= h; ++c) {
            RegionMask part = RegionMask::from_labels(domain, cand.labels, c);
            try {
                EigenResult er = lambda1(part);
                cand.lambda1s.push_back(er.lambda);
                cand.eigenfunctions.push_back(std::move(er.eigenfunction));
            } catch (const EmptyRegion&) {
                degenerate = true;
                break;
            }
        }
        if (degenerate) {
            ++restarts;
            continue;
        }
        cand.objective = partition_objective(cand.lambda1s, p);
        if (!have_best || cand.objective < best.objective) {
            best = std::move(cand);
            have_best = true;
        }
    }
    if (!have_best) throw DegenerateSeed("optimize_partition: every start collapsed");
    best.restarts = restarts;
    return best;
}

std::string Partition::labels_csv() const {
    std::ostringstream out;
    out << "i,j,label\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) out << i << ',' << j << ',' << labels[grid.idx(i, j)]
                                              << '\n';
    return out.str();
}

std::string Partition::parts_json(const std::vector<double>& scales) const {
    nlohmann::json parts = nlohmann::json::array();
    for (std::size_t c = 0; c < lambda1s.size(); ++c) {
        double mass = 0.0;
        for (std::size_t k = 0; k < labels.size(); ++k)
            if (labels[k] == static_cast<int>(c) + 1) mass += 1.0;
        mass *= grid.h * grid.h;
        parts.push_back({{"lambda1", lambda1s[c]},
                         {"mass", mass},
                         {"a_i", c < scales.size() ? scales[c] : 1.0}});
    }
    return nlohmann::json{{"parts", parts}, {"p", std::isinf(p) ? -1.0 : p},
                          {"objective", objective}}
               .dump(2) +
           "\n";
}

PartitionConfigResult partition_to_config(const Partition& partition) {
    const Grid2D& g = partition.grid;
    const int h = static_cast<int>(partition.lambda1s.size());
    if (h == 0) throw Error("partition_to_config: empty partition");

    // one-sided derivative proxies at label interfaces: the eigenfunction
    // value one node away from the interface, same estimator on both sides
    std::vector<std::vector<double>> log_ratio_sum(h, std::vector<double>(h, 0.0));
    std::vector<std::vector<int>> samples(h, std::vector<int>(h, 0));
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            std::size_t k = g.idx(i, j);
            int a = partition.labels[k];
            if (a <= 0) continue;
            for (std::size_t nb : {k + 1, k + static_cast<std::size_t>(g.nx)}) {
                int b = partition.labels[nb];
                if (b <= 0 || b == a) continue;
                double ga = partition.eigenfunctions[a - 1].values[k];
                double gb = partition.eigenfunctions[b - 1].values[nb];
                if (ga <= 0.0 || gb <= 0.0) continue;
                double lr = std::log(gb) - std::log(ga);
                log_ratio_sum[a - 1][b - 1] += lr;
                samples[a - 1][b - 1] += 1;
                log_ratio_sum[b - 1][a - 1] -= lr;
                samples[b - 1][a - 1] += 1;
            }
        }
    }

    // least squares for x_i = log a_i with x_i - x_j = mean log(g_j/g_i)
    std::vector<std::vector<double>> M(h, std::vector<double>(h, 0.0));
    std::vector<double> rhs(h, 0.0);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < h; ++j) {
            if (i == j || samples[i][j] == 0) continue;
            double target = log_ratio_sum[i][j] / samples[i][j];
            M[i][i] += 1.0;
            M[i][j] -= 1.0;
            rhs[i] += target;
        }
    }
    // gauge fixing: x_0 = 0
    for (int j = 0; j < h; ++j) M[0][j] = 0.0;
    M[0][0] = 1.0;
    rhs[0] = 0.0;
    // tiny dense solve
    std::vector<double> x(h, 0.0);
    {
        auto A = M;
        auto b = rhs;
        for (int col = 0; col < h; ++col) {
            int piv = col;
            for (int r = col + 1; r < h; ++r)
                if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
            std::swap(A[piv], A[col]);
            std::swap(b[piv], b[col]);
            if (std::abs(A[col][col]) < 1e-12) continue;  // disconnected part keeps scale 1
            for (int r = 0; r < h; ++r) {
                if (r == col) continue;
                double f = A[r][col] / A[col][col];
                for (int cc = col; cc < h; ++cc) A[r][cc] -= f * A[col][cc];
                b[r] -= f * b[col];
            }
        }
        for (int r = 0; r < h; ++r) x[r] = std::abs(A[r][r]) < 1e-12 ? 0.0 : b[r] / A[r][r];
    }
    // normalize the geometric mean of the scales to one
    double mean = 0.0;
    for (double xi : x) mean += xi;
    mean /= h;
    std::vector<double> scales(h);
    for (int i = 0; i < h; ++i) scales[i] = std::exp(x[i] - mean);

    std::vector<ScalarField> comps;
    ReactionSpec spec(h);
    for (int c = 0; c < h; ++c) {
        ScalarField f = partition.eigenfunctions[c];
        for (auto& v : f.values) v *= scales[c];
        comps.push_back(std::move(f));
        spec[c] = ReactionTerm::linear(partition.lambda1s[c]);
    }
    return PartitionConfigResult{SegregatedConfig(std::move(comps), std::move(spec)), scales};
}

} // namespace seglab
