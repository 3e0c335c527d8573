#include "seglab/almgren.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "seglab/quadrature.hpp"

namespace seglab {

double energy(const SegregatedConfig& U, Point x0, double r) {
    const Grid2D& g = U.grid();
    require_ball(g, x0, r, 2.0 * g.h);
    const auto& dir = U.dirichlet_density().values;
    const auto& rea = U.reaction_density().values;
    double integral =
        ball_weighted_sum(g, x0, r, [&](int i, int j) {
            std::size_t k = g.idx(i, j);
            return dir[k] - rea[k];
        });
    return integral / std::pow(r, kDim - 2);
}

double average(const SegregatedConfig& U, Point x0, double r) {
    double integral = circle_integral(U.square_density(), x0, r);
    return integral / std::pow(r, kDim - 1);
}

double frequency(const SegregatedConfig& U, Point x0, double r) {
    double H = average(U, x0, r);
    if (H <= kAverageFloor) throw DegenerateAverage("H underflow at r=" + std::to_string(r));
    return energy(U, x0, r) / H;
}

double pohozaev_remainder(const SegregatedConfig& U, Point x0, double r) {
    const Grid2D& g = U.grid();
    require_ball(g, x0, r, 2.0 * g.h);
    const int h = U.h_components();
    double radial = ball_weighted_sum(g, x0, r, [&](int i, int j) {
        std::size_t k = g.idx(i, j);
        const double dx = g.x(i) - x0.x;
        const double dy = g.y(j) - x0.y;
        double s = 0.0;
        for (int c = 0; c < h; ++c) {
            const auto& grad = U.component_gradient(c);
            s += U.reaction_value(c).values[k] * (grad.gx[k] * dx + grad.gy[k] * dy);
        }
        return s;
    });
    double bulk = 0.0;
    if (kDim != 2)
        bulk = ball_weighted_sum(
            g, x0, r, [&](int i, int j) { return U.reaction_density().values[g.idx(i, j)]; });
    double boundary = circle_integral(U.reaction_density(), x0, r);
    const double rn1 = std::pow(r, kDim - 1);
    return 2.0 * radial / rn1 + (kDim - 2) * bulk / rn1 - boundary / std::pow(r, kDim - 2);
}

FrequencyProfile frequency_profile(const SegregatedConfig& U, Point x0, double r_min,
                                   double r_max, int n_radii) {
    const Grid2D& g = U.grid();
    if (!(r_min > 0.0) || !(r_max > r_min)) throw Error("frequency_profile: bad radius window");
    if (r_min < 4.0 * g.h - 1e-12 * g.h)
        throw Error("frequency_profile: r_min below 4h is unreliable on this grid");
    require_ball(g, x0, r_max, 2.0 * g.h);
    if (n_radii < 2) throw Error("frequency_profile: need at least 2 radii");

    FrequencyProfile p;
    p.center = x0;
    p.radii.resize(n_radii);
    const double q = std::pow(r_max / r_min, 1.0 / (n_radii - 1));
    for (int k = 0; k < n_radii; ++k) p.radii[k] = r_min * std::pow(q, k);
    p.radii.back() = r_max;

    p.E.resize(n_radii);
    p.H.resize(n_radii);
    p.N.resize(n_radii);
    p.R.resize(n_radii);
    const bool zero_reaction = U.reaction().is_zero();
    for (int k = 0; k < n_radii; ++k) {
        const double r = p.radii[k];
        p.E[k] = energy(U, x0, r);
        p.H[k] = average(U, x0, r);
        if (p.H[k] <= kAverageFloor)
            throw DegenerateAverage("H underflow in profile at r=" + std::to_string(r));
        p.N[k] = p.E[k] / p.H[k];
        p.R[k] = zero_reaction ? 0.0 : pohozaev_remainder(U, x0, r);
    }
    return p;
}

std::string FrequencyProfile::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "r,E,H,N,R\n";
    for (std::size_t k = 0; k < radii.size(); ++k)
        out << radii[k] << ',' << E[k] << ',' << H[k] << ',' << N[k] << ',' << R[k] << '\n';
    return out.str();
}

namespace {

// Worst relative drop of r -> e^{c r}(N(r)+1) along the profile.
double monotone_violation(const FrequencyProfile& p, double c) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        const double g0 = std::exp(c * p.radii[k]) * (p.N[k] + 1.0);
        const double g1 = std::exp(c * p.radii[k + 1]) * (p.N[k + 1] + 1.0);
        if (g1 < g0) worst = std::max(worst, (g0 - g1) / std::max(std::abs(g0), 1e-300));
    }
    return worst;
}

} // namespace

double extrapolate_n0(const FrequencyProfile& p, double* r_lo, double* r_hi) {
    const std::size_t m = p.size();
    std::size_t take = std::max<std::size_t>(2, (m + 2) / 3);
    take = std::min(take, m);
    double sr = 0.0, sn = 0.0, srr = 0.0, srn = 0.0;
    for (std::size_t k = 0; k < take; ++k) {
        sr += p.radii[k];
        sn += p.N[k];
        srr += p.radii[k] * p.radii[k];
        srn += p.radii[k] * p.N[k];
    }
    const double mcount = static_cast<double>(take);
    const double denom = mcount * srr - sr * sr;
    double intercept;
    if (std::abs(denom) < 1e-300) {
        intercept = sn / mcount;
    } else {
        const double slope = (mcount * srn - sr * sn) / denom;
        intercept = (sn - slope * sr) / mcount;
    }
    if (r_lo) *r_lo = p.radii.front();
    if (r_hi) *r_hi = p.radii[take - 1];
    return intercept;
}

MonotonicityReport monotonicity_check(const FrequencyProfile& p, double d_bound) {
    if (p.size() < 8) throw Error("monotonicity_check: need at least 8 radii");
    MonotonicityReport rep;
    rep.d_bound = d_bound;
    rep.n0 = extrapolate_n0(p, &rep.fit_r_lo, &rep.fit_r_hi);

    if (monotone_violation(p, 0.0) <= kMonotoneSlack) {
        rep.c_tilde = 0.0;
    } else if (monotone_violation(p, kCTildeMax) > kMonotoneSlack) {
        throw NonMonotone("no C~ <= 1e3 restores monotonicity of e^{Cr}(N+1)");
    } else {
        double lo = 0.0, hi = kCTildeMax;
        while (hi - lo > 1e-4) {
            double mid = 0.5 * (lo + hi);
            if (monotone_violation(p, mid) <= kMonotoneSlack)
                hi = mid;
            else
                lo = mid;
        }
        rep.c_tilde = hi;
    }
    rep.max_violation = monotone_violation(p, rep.c_tilde);
    rep.pass = rep.max_violation <= kMonotoneSlack;
    rep.zero_reaction_monotone = !(d_bound == 0.0 && rep.c_tilde > 0.0);
    return rep;
}

DoublingReport doubling_check(const SegregatedConfig& U, Point x0, double r1, double r2,
                              double c_tilde, double rel_slack) {
    if (r1 > r2) std::swap(r1, r2);
    DoublingReport rep;
    if (r1 == r2) {
        rep.ratio = 1.0;
        rep.bound = 1.0;
        rep.pass = true;
        return rep;
    }
    const double H1 = average(U, x0, r1);
    const double H2 = average(U, x0, r2);
    if (H1 <= kAverageFloor) throw DegenerateAverage("H underflow in doubling_check");
    rep.ratio = H2 / H1;
    const double C = std::abs(frequency(U, x0, r2));
    rep.c_bar = (C + 1.0) * std::exp(c_tilde * r2) - 1.0;
    rep.bound = std::pow(r2 / r1, 2.0 * rep.c_bar);
    rep.pass = rep.ratio <= rep.bound * (1.0 + rel_slack);
    return rep;
}

double log_derivative_identity_check(const FrequencyProfile& p) {
    if (p.size() < 8) throw Error("log_derivative_identity_check: need at least 8 radii");
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < p.size(); ++k) {
        const double dlogH = std::log(p.H[k + 1]) - std::log(p.H[k - 1]);
        const double dlogr = std::log(p.radii[k + 1]) - std::log(p.radii[k - 1]);
        const double slope = dlogH / dlogr;  // = r * dlogH/dr
        const double target = 2.0 * p.N[k];
        const double rel = std::abs(slope - target) / std::max(std::abs(target), 0.1);
        worst = std::max(worst, rel);
    }
    return worst;
}

std::string profile_metadata_json(const FrequencyProfile& profile,
                                  const MonotonicityReport& report) {
    nlohmann::json j = {
        {"center", {profile.center.x, profile.center.y}},
        {"C_tilde", report.c_tilde},
        {"N0_extrapolated", report.n0},
        {"pass_flags",
         {{"monotone", report.pass},
          {"zero_reaction_monotone", report.zero_reaction_monotone}}},
    };
    return j.dump(2) + "\n";
}

} // namespace seglab
