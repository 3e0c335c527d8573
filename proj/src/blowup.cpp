#include "seglab/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "seglab/almgren.hpp"
#include "seglab/interp.hpp"

namespace seglab {

BlowupFrame make_frame(const SegregatedConfig& U, Point x0, double t) {
    const Grid2D& g = U.grid();
    // the window corners sit at distance 2 sqrt(2) t from the center
    require_ball(g, x0, 2.0 * std::sqrt(2.0) * t, 2.0 * g.h);

    const double H = average(U, x0, t);
    if (H <= kAverageFloor) throw DegenerateAverage("make_frame: H underflow at scale t");
    const double rho = std::sqrt(H);

    int n_cells = std::max(192, static_cast<int>(std::lround(4.0 * t / g.h)));
    Grid2D fg(n_cells + 1, n_cells + 1, 4.0 / n_cells, {-2.0, -2.0});

    std::vector<ScalarField> comps;
    comps.reserve(U.h_components());
    for (int c = 0; c < U.h_components(); ++c) {
        ScalarField f(fg);
        const ScalarField& src = U.component(c);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < fg.ny; ++j) {
            for (int i = 0; i < fg.nx; ++i) {
                Point p{x0.x + t * fg.x(i), x0.y + t * fg.y(j)};
                double v = interp_value(src, p) / rho;
                f.at(i, j) = std::max(v, 0.0);
            }
        }
        comps.push_back(std::move(f));
    }
    BlowupFrame frame{x0, t, rho, 0.0,
                      SegregatedConfig(std::move(comps), U.reaction().rescaled(t, rho))};

    // homogeneity degree from the slope of log H(0,.,r) vs log r on [0.1, 1]
    const int m = 16;
    double slx = 0.0, sly = 0.0, slxx = 0.0, slxy = 0.0;
    for (int k = 0; k < m; ++k) {
        double r = 0.1 * std::pow(10.0, static_cast<double>(k) / (m - 1));
        double Hk = average(frame.config, {0.0, 0.0}, r);
        if (Hk <= kAverageFloor) throw DegenerateAverage("make_frame: degenerate frame average");
        double lx = std::log(r), ly = std::log(Hk);
        slx += lx;
        sly += ly;
        slxx += lx * lx;
        slxy += lx * ly;
    }
    const double slope = (m * slxy - slx * sly) / (m * slxx - slx * slx);
    frame.alpha = 0.5 * slope;
    return frame;
}

ScalingResiduals scaling_identity_check(const SegregatedConfig& U, Point x0, double t, Point y0,
                                        double r) {
    BlowupFrame frame = make_frame(U, x0, t);
    const double rho2 = frame.rho * frame.rho;
    Point src_center{x0.x + t * y0.x, x0.y + t * y0.y};

    double Ev = energy(frame.config, y0, r);
    double Hv = average(frame.config, y0, r);
    double Eu = energy(U, src_center, t * r) / rho2;
    double Hu = average(U, src_center, t * r) / rho2;
    if (Hv <= kAverageFloor || Hu <= kAverageFloor)
        throw DegenerateAverage("scaling_identity_check: H underflow");

    ScalingResiduals res;
    res.e = std::abs(Ev - Eu) / std::max(std::abs(Eu), 1e-300);
    res.h = std::abs(Hv - Hu) / std::max(std::abs(Hu), 1e-300);
    res.n = std::abs(Ev / Hv - Eu / Hu) / std::max(std::abs(Eu / Hu), 1e-300);
    return res;
}

SphericalTrace spherical_trace(const BlowupFrame& frame, double r, int n_angles) {
    const SegregatedConfig& V = frame.config;
    require_ball(V.grid(), {0.0, 0.0}, r, 2.0 * V.grid().h);
    const int h = V.h_components();

    SphericalTrace tr;
    tr.angles.resize(n_angles);
    tr.values.assign(h, std::vector<double>(n_angles));
    for (int k = 0; k < n_angles; ++k) {
        double th = 2.0 * M_PI * k / n_angles;
        tr.angles[k] = th;
        Point p{r * std::cos(th), r * std::sin(th)};
        for (int c = 0; c < h; ++c) tr.values[c][k] = interp_value(V.component(c), p);
    }

    std::vector<int> leader(n_angles, -1);
    for (int k = 0; k < n_angles; ++k) {
        double best = 0.0;
        for (int c = 0; c < h; ++c) {
            if (tr.values[c][k] > best) {
                best = tr.values[c][k];
                leader[k] = c;
            }
        }
    }

    // transition angles where the leader changes (cyclic)
    std::vector<std::pair<double, int>> cuts;  // (angle, leader after the cut)
    const double dth = 2.0 * M_PI / n_angles;
    for (int k = 0; k < n_angles; ++k) {
        int k1 = (k + 1) % n_angles;
        if (leader[k] == leader[k1]) continue;
        double frac = 0.5;
        if (leader[k] >= 0 && leader[k1] >= 0) {
            double w0 = tr.values[leader[k]][k] - tr.values[leader[k1]][k];
            double w1 = tr.values[leader[k]][k1] - tr.values[leader[k1]][k1];
            if (w0 != w1) frac = std::clamp(w0 / (w0 - w1), 0.0, 1.0);
        }
        cuts.push_back({tr.angles[k] + frac * dth, leader[k1]});
    }

    if (cuts.empty()) {
        if (leader[0] >= 0) tr.arcs.push_back({0.0, 2.0 * M_PI, leader[0]});
        return tr;
    }
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        double start = cuts[c].first;
        double end = c + 1 < cuts.size() ? cuts[c + 1].first : cuts[0].first + 2.0 * M_PI;
        if (cuts[c].second >= 0)
            tr.arcs.push_back({start, end - start, cuts[c].second});
    }
    return tr;
}

SphericalClassification classify_trace(const SphericalTrace& trace) {
    SphericalClassification cl;
    cl.arc_count = static_cast<int>(trace.arcs.size());
    if (cl.arc_count == 0) throw Error("classify_trace: no positivity arcs");
    double lam_mean = 0.0;
    for (const Arc& a : trace.arcs) {
        double lam = (M_PI / a.length) * (M_PI / a.length);
        // lambda = alpha (alpha + N - 2); in the plane alpha = sqrt(lambda)
        const double nm2 = kDim - 2;
        double alpha = 0.5 * (-nm2 + std::sqrt(nm2 * nm2 + 4.0 * lam));
        cl.lengths.push_back(a.length);
        cl.lambdas.push_back(lam);
        cl.alphas.push_back(alpha);
        lam_mean += lam;
    }
    lam_mean /= cl.arc_count;
    cl.consensus = true;
    for (double lam : cl.lambdas)
        if (std::abs(lam - lam_mean) > 0.05 * lam_mean) cl.consensus = false;
    cl.min_alpha = *std::min_element(cl.alphas.begin(), cl.alphas.end());
    return cl;
}

double homogeneity_residual(const BlowupFrame& frame) {
    double worst = 0.0;
    const int m = 14;
    for (int k = 0; k < m; ++k) {
        double r = 0.2 + (1.5 - 0.2) * k / (m - 1);
        double N = frequency(frame.config, {0.0, 0.0}, r);
        worst = std::max(worst, std::abs(N - frame.alpha));
    }
    return worst;
}

std::vector<double> frame_convergence(const SegregatedConfig& U, Point x0,
                                      const std::vector<double>& t_schedule) {
    if (t_schedule.size() < 2) throw Error("frame_convergence: need at least two scales");
    Grid2D common(161, 161, 2.0 / 160, {-1.0, -1.0});
    std::vector<std::vector<ScalarField>> sampled;
    for (double t : t_schedule) {
        BlowupFrame f = make_frame(U, x0, t);
        std::vector<ScalarField> comps;
        for (int c = 0; c < f.config.h_components(); ++c) {
            ScalarField s(common);
            for (int j = 0; j < common.ny; ++j)
                for (int i = 0; i < common.nx; ++i)
                    s.at(i, j) = interp_value(f.config.component(c), common.node(i, j));
            comps.push_back(std::move(s));
        }
        sampled.push_back(std::move(comps));
    }
    std::vector<double> diffs;
    for (std::size_t q = 0; q + 1 < sampled.size(); ++q) {
        double worst = 0.0;
        for (std::size_t c = 0; c < sampled[q].size(); ++c) {
            for (int j = 0; j < common.ny; ++j) {
                for (int i = 0; i < common.nx; ++i) {
                    if (std::hypot(common.x(i), common.y(j)) > 1.0) continue;
                    worst = std::max(worst, std::abs(sampled[q][c].at(i, j) -
                                                     sampled[q + 1][c].at(i, j)));
                }
            }
        }
        diffs.push_back(worst);
    }
    return diffs;
}

} // namespace seglab
