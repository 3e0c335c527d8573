#include "seglab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "seglab/interp.hpp"

namespace seglab {

namespace {

// Edge identifier: (lower node flat index, axis). axis 0 = toward +x.
using EdgeKey = std::pair<std::size_t, int>;

struct Crossing {
    Point p;
};

struct Segment {
    EdgeKey a, b;
    Point pa, pb;
};

double edge_cross_t(double w0, double w1) {
    // linear zero of w along the edge; callers guarantee a sign change
    double denom = w0 - w1;
    if (denom == 0.0) return 0.5;
    return std::clamp(w0 / denom, 0.0, 1.0);
}

} // namespace

NodalSet extract_nodal_set(const SegregatedConfig& U, double dominance_threshold) {
    const Grid2D& g = U.grid();
    const int h = U.h_components();
    NodalSet out;
    out.threshold = dominance_threshold;

    std::vector<Segment> segments;
    std::vector<std::uint8_t> junction(static_cast<std::size_t>(g.nx - 1) * (g.ny - 1), 0);

    std::vector<double> cellmax(h);
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            const std::size_t corners[4] = {g.idx(i, j), g.idx(i + 1, j), g.idx(i + 1, j + 1),
                                            g.idx(i, j + 1)};
            // distinct per-corner leaders above the threshold
            int leaders[4];
            for (int c = 0; c < 4; ++c) {
                double best = dominance_threshold;
                int who = -1;
                for (int q = 0; q < h; ++q) {
                    double v = U.component(q).values[corners[c]];
                    if (v > best) {
                        best = v;
                        who = q;
                    }
                }
                leaders[c] = who;
            }
            int distinct = 0;
            for (int c = 0; c < 4; ++c) {
                if (leaders[c] < 0) continue;
                bool seen = false;
                for (int d = 0; d < c; ++d) seen |= leaders[d] == leaders[c];
                if (!seen) ++distinct;
            }
            if (distinct >= 3) {
                junction[static_cast<std::size_t>(j) * (g.nx - 1) + i] = 1;
                continue;
            }

            // dominance pair: the two largest components over the cell corners
            for (int q = 0; q < h; ++q) {
                double m = 0.0;
                for (auto k : corners) m = std::max(m, U.component(q).values[k]);
                cellmax[q] = m;
            }
            int a = 0;
            for (int q = 1; q < h; ++q)
                if (cellmax[q] > cellmax[a]) a = q;
            int b = -1;
            for (int q = 0; q < h; ++q) {
                if (q == a) continue;
                if (b < 0 || cellmax[q] > cellmax[b]) b = q;
            }
            double w[4];
            for (int c = 0; c < 4; ++c) {
                double va = U.component(a).values[corners[c]];
                double vb = b >= 0 ? U.component(b).values[corners[c]] : 0.0;
                w[c] = va - vb;
            }
            int bits = 0;
            for (int c = 0; c < 4; ++c)
                if (w[c] > 0.0) bits |= 1 << c;
            if (bits == 0 || bits == 15) continue;

            // crossings on the four cell edges (corner order 0-1-2-3 ccw)
            EdgeKey keys[4] = {
                {g.idx(i, j), 0},      // bottom
                {g.idx(i + 1, j), 1},  // right
                {g.idx(i, j + 1), 0},  // top
                {g.idx(i, j), 1},      // left
            };
            Point base[4] = {g.node(i, j), g.node(i + 1, j), g.node(i, j + 1), g.node(i, j)};
            double dircos[4][2] = {{1, 0}, {0, 1}, {1, 0}, {0, 1}};
            int cedge[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};

            int found[4];
            Point pts[4];
            int nfound = 0;
            for (int e = 0; e < 4; ++e) {
                double w0 = w[cedge[e][0]], w1 = w[cedge[e][1]];
                bool s0 = w0 > 0.0, s1 = w1 > 0.0;
                if (s0 == s1) continue;
                double t = edge_cross_t(w0, w1);
                pts[nfound] = {base[e].x + dircos[e][0] * t * g.h,
                               base[e].y + dircos[e][1] * t * g.h};
                found[nfound++] = e;
            }
            if (nfound == 2) {
                segments.push_back({keys[found[0]], keys[found[1]], pts[0], pts[1]});
            } else if (nfound == 4) {
                // saddle: resolve pairing with the cell-center sign
                double wc = 0.25 * (w[0] + w[1] + w[2] + w[3]);
                bool center_pos = wc > 0.0;
                bool corner0_pos = w[0] > 0.0;
                if (center_pos == corner0_pos) {
                    segments.push_back({keys[found[0]], keys[found[3]], pts[0], pts[3]});
                    segments.push_back({keys[found[1]], keys[found[2]], pts[1], pts[2]});
                } else {
                    segments.push_back({keys[found[0]], keys[found[1]], pts[0], pts[1]});
                    segments.push_back({keys[found[2]], keys[found[3]], pts[2], pts[3]});
                }
            }
        }
    }

    // cluster junction cells into singular candidates (8-connected)
    {
        const int cx = g.nx - 1, cy = g.ny - 1;
        std::vector<std::uint8_t> seen(junction.size(), 0);
        for (int j = 0; j < cy; ++j) {
            for (int i = 0; i < cx; ++i) {
                std::size_t k = static_cast<std::size_t>(j) * cx + i;
                if (!junction[k] || seen[k]) continue;
                double sx = 0.0, sy = 0.0;
                int count = 0;
                std::vector<std::size_t> stack{k};
                seen[k] = 1;
                while (!stack.empty()) {
                    std::size_t q = stack.back();
                    stack.pop_back();
                    int qi = static_cast<int>(q % cx), qj = static_cast<int>(q / cx);
                    sx += g.x(qi) + 0.5 * g.h;
                    sy += g.y(qj) + 0.5 * g.h;
                    ++count;
                    for (int dj = -1; dj <= 1; ++dj) {
                        for (int di = -1; di <= 1; ++di) {
                            int ni = qi + di, nj = qj + dj;
                            if (ni < 0 || nj < 0 || ni >= cx || nj >= cy) continue;
                            std::size_t nk = static_cast<std::size_t>(nj) * cx + ni;
                            if (junction[nk] && !seen[nk]) {
                                seen[nk] = 1;
                                stack.push_back(nk);
                            }
                        }
                    }
                }
                out.singular_candidates.push_back({sx / count, sy / count});
            }
        }
    }

    if (segments.empty() && out.singular_candidates.empty())
        throw EmptyNodalSet("no dominance sign change on the grid");

    // chain segments into polylines through shared edge crossings
    std::map<EdgeKey, std::vector<int>> by_edge;
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        by_edge[segments[s].a].push_back(s);
        by_edge[segments[s].b].push_back(s);
    }
    std::vector<std::uint8_t> used(segments.size(), 0);

    auto walk = [&](int start, bool from_a) {
        std::vector<Point> line;
        int cur = start;
        EdgeKey enter = from_a ? segments[start].a : segments[start].b;
        line.push_back(from_a ? segments[start].pa : segments[start].pb);
        while (true) {
            used[cur] = 1;
            EdgeKey exit = (segments[cur].a == enter) ? segments[cur].b : segments[cur].a;
            Point pexit = (segments[cur].a == enter) ? segments[cur].pb : segments[cur].pa;
            line.push_back(pexit);
            const auto& cand = by_edge[exit];
            int next = -1;
            for (int s : cand)
                if (!used[s]) next = s;
            if (next < 0) break;
            enter = exit;
            cur = next;
        }
        return line;
    };

    // open chains first (edges with a single attached segment), then loops
    for (int pass = 0; pass < 2; ++pass) {
        for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
            if (used[s]) continue;
            bool a_open = by_edge[segments[s].a].size() == 1;
            bool b_open = by_edge[segments[s].b].size() == 1;
            if (pass == 0 && !a_open && !b_open) continue;
            out.polylines.push_back(walk(s, pass == 0 ? a_open : true));
        }
    }
    if (out.polylines.empty() && out.singular_candidates.empty())
        throw EmptyNodalSet("no dominance sign change on the grid");
    return out;
}

double NodalSet::nearest_candidate_distance(Point p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : singular_candidates) best = std::min(best, dist(p, c));
    return best;
}

std::string NodalSet::to_geojson() const {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& line : polylines) {
        nlohmann::json coords = nlohmann::json::array();
        for (const auto& p : line) coords.push_back({p.x, p.y});
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                            {"properties", nlohmann::json::object()}});
    }
    for (const auto& c : singular_candidates) {
        features.push_back(
            {{"type", "Feature"},
             {"geometry", {{"type", "Point"}, {"coordinates", {c.x, c.y}}}},
             {"properties", {{"kind", "singular_candidate"}}}});
    }
    nlohmann::json root = {{"type", "FeatureCollection"}, {"features", features}};
    return root.dump(2) + "\n";
}

namespace {

double boundary_distance(const Grid2D& g, Point p) {
    double dx = std::min(p.x - g.origin.x, g.xmax() - p.x);
    double dy = std::min(p.y - g.origin.y, g.ymax() - p.y);
    return std::min(dx, dy);
}

} // namespace

SingularPointReport classify_point(const SegregatedConfig& U, const NodalSet& nodal, Point p,
                                   const ClassifyOptions& opts) {
    const Grid2D& g = U.grid();
    const double h = g.h;
    if (boundary_distance(g, p) < 8.0 * h)
        throw Error("classify_point: sample closer than 8h to the grid boundary");

    SingularPointReport rep;
    rep.location = p;

    double r_cap = opts.r_cap > 0.0
                       ? opts.r_cap
                       : 0.25 * std::min(g.extent_x(), g.extent_y());
    double r_max = std::min(r_cap, boundary_distance(g, p) - 2.5 * h);
    double cand_dist = nodal.nearest_candidate_distance(p);
    if (cand_dist > 2.0 * h && 0.5 * cand_dist < r_max) r_max = 0.5 * cand_dist;
    double r_min = 4.0 * h;
    if (r_max < 2.0 * r_min) r_max = std::min(2.0 * r_min, boundary_distance(g, p) - 2.5 * h);
    if (r_max <= r_min)
        throw Error("classify_point: no usable radius window at this sample");

    FrequencyProfile prof = frequency_profile(U, p, r_min, r_max, opts.n_radii);
    MonotonicityReport mono = monotonicity_check(prof, U.d_bound());
    rep.n0 = mono.n0;
    rep.c_tilde = mono.c_tilde;
    rep.fit_r_lo = mono.fit_r_lo;
    rep.fit_r_hi = mono.fit_r_hi;
    rep.singular = rep.n0 >= kNStar;

    // branches: polyline crossings of the circle of radius branch_radius_h * h
    const double rc = opts.branch_radius_h * h;
    std::vector<double> angles;
    for (const auto& line : nodal.polylines) {
        for (std::size_t s = 0; s + 1 < line.size(); ++s) {
            Point a = line[s], b = line[s + 1];
            double ax = a.x - p.x, ay = a.y - p.y;
            double bx = b.x - p.x, by = b.y - p.y;
            double dxs = bx - ax, dys = by - ay;
            double A = dxs * dxs + dys * dys;
            if (A == 0.0) continue;
            double B = 2.0 * (ax * dxs + ay * dys);
            double C = ax * ax + ay * ay - rc * rc;
            double disc = B * B - 4.0 * A * C;
            if (disc < 0.0) continue;
            double sq = std::sqrt(disc);
            for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
                if (t < 0.0 || t > 1.0) continue;
                double x = ax + t * dxs, y = ay + t * dys;
                angles.push_back(std::atan2(y, x));
            }
        }
    }
    std::sort(angles.begin(), angles.end());
    // merge crossing clusters (a wiggling polyline may cut the circle twice)
    std::vector<double> merged;
    const double gap = 0.2;
    for (double a : angles) {
        if (!merged.empty() && a - merged.back() < gap)
            merged.back() = 0.5 * (merged.back() + a);
        else
            merged.push_back(a);
    }
    if (merged.size() >= 2 && (merged.front() + 2.0 * M_PI - merged.back()) < gap) {
        merged.front() = 0.5 * (merged.front() + merged.back() - 2.0 * M_PI);
        if (merged.front() < -M_PI) merged.front() += 2.0 * M_PI;
        merged.pop_back();
        std::sort(merged.begin(), merged.end());
    }
    rep.branch_angles = merged;
    rep.branch_count = static_cast<int>(merged.size());
    return rep;
}

std::vector<SingularPointReport> classify_points(const SegregatedConfig& U,
                                                 const NodalSet& nodal,
                                                 const std::vector<Point>& points,
                                                 const ClassifyOptions& opts) {
    std::vector<SingularPointReport> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(classify_point(U, nodal, p, opts));
    return out;
}

namespace {

// Nearest polyline vertex and the local tangent there.
bool nearest_polyline_tangent(const NodalSet& nodal, Point p, Point* tangent) {
    double best = std::numeric_limits<double>::infinity();
    Point tan{1.0, 0.0};
    bool found = false;
    for (const auto& line : nodal.polylines) {
        for (std::size_t s = 0; s < line.size(); ++s) {
            double d = dist(line[s], p);
            if (d < best) {
                best = d;
                std::size_t a = s > 0 ? s - 1 : s;
                std::size_t b = s + 1 < line.size() ? s + 1 : s;
                if (a == b) continue;
                tan = {line[b].x - line[a].x, line[b].y - line[a].y};
                found = true;
            }
        }
    }
    if (!found) return false;
    double n = std::hypot(tan.x, tan.y);
    if (n == 0.0) return false;
    *tangent = {tan.x / n, tan.y / n};
    return true;
}

double gradient_modulus_of_leader(const SegregatedConfig& U, Point p) {
    int lead = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < U.h_components(); ++c) {
        double v = interp_value(U.component(c), p);
        if (v > best) {
            best = v;
            lead = c;
        }
    }
    double gx, gy;
    interp_vector(U.component_gradient(lead), p, gx, gy);
    return std::hypot(gx, gy);
}

} // namespace

ReflectionReport reflection_check(const SegregatedConfig& U, const NodalSet& nodal, Point x0,
                                  double probe_distance) {
    const Grid2D& g = U.grid();
    const double h = g.h;
    double s = probe_distance > 0.0 ? probe_distance : 2.0 * h;
    if (s < 2.0 * h || s > 6.0 * h)
        throw Error("reflection_check: probe distance outside [2h, 6h]");
    if (nodal.nearest_candidate_distance(x0) < 10.0 * h)
        throw TooCloseToSingular("reflection_check: sample within 10h of a singular candidate");

    Point tan;
    if (!nearest_polyline_tangent(nodal, x0, &tan))
        throw Error("reflection_check: no polyline near the sample");
    Point nu{-tan.y, tan.x};

    ReflectionReport rep;
    rep.normal = nu;
    auto one_side = [&](double sign) {
        Point p1{x0.x + sign * s * nu.x, x0.y + sign * s * nu.y};
        Point p2{x0.x + sign * 2.0 * s * nu.x, x0.y + sign * 2.0 * s * nu.y};
        double g1 = gradient_modulus_of_leader(U, p1);
        double g2 = gradient_modulus_of_leader(U, p2);
        return 2.0 * g1 - g2;  // linear extrapolation to the interface
    };
    rep.g_plus = one_side(+1.0);
    rep.g_minus = one_side(-1.0);
    double gmax = std::max(rep.g_plus, rep.g_minus);
    rep.mismatch = gmax > 0.0 ? std::abs(rep.g_plus - rep.g_minus) / gmax : 0.0;
    const double tau_grad = 0.01 * U.lip_estimate();
    rep.nondegenerate = std::min(rep.g_plus, rep.g_minus) >= tau_grad;
    return rep;
}

double equal_angle_check(const SingularPointReport& report) {
    const int k = report.branch_count;
    if (!report.singular || k < 3)
        throw Error("equal_angle_check: needs a singular report with >= 3 branches");
    const double target = 2.0 * M_PI / k;
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
        double a = report.branch_angles[i];
        double b = i + 1 < k ? report.branch_angles[i + 1] : report.branch_angles[0] + 2.0 * M_PI;
        worst = std::max(worst, std::abs((b - a) - target));
    }
    return worst;
}

std::vector<FlatnessReport> flatness_scan(const SegregatedConfig& U, const NodalSet& nodal,
                                          Point x0, const std::vector<double>& radii) {
    const Grid2D& g = U.grid();
    std::vector<FlatnessReport> out;
    for (double r : radii) {
        if (!g.contains_ball(x0, r, 0.0)) throw BallOutOfDomain("flatness_scan ball outside grid");
        // vertices inside the ball
        std::vector<Point> verts;
        for (const auto& line : nodal.polylines)
            for (const auto& p : line)
                if (dist(p, x0) <= r) verts.push_back(p);

        FlatnessReport rep;
        rep.center = x0;
        rep.radius = r;
        if (verts.empty()) {
            rep.delta = 1.0;
            out.push_back(rep);
            continue;
        }
        auto one_sided = [&](double phi) {
            double c = std::cos(phi), sn = std::sin(phi);
            double worst = 0.0;
            for (const auto& q : verts) {
                double dx = q.x - x0.x, dy = q.y - x0.y;
                worst = std::max(worst, std::abs(dx * sn - dy * c));
            }
            return worst;
        };
        // coarse scan plus golden-section refinement
        double best_phi = 0.0, best_val = std::numeric_limits<double>::infinity();
        const int coarse = 256;
        for (int k = 0; k < coarse; ++k) {
            double phi = M_PI * k / coarse;
            double v = one_sided(phi);
            if (v < best_val) {
                best_val = v;
                best_phi = phi;
            }
        }
        {
            double lo = best_phi - M_PI / coarse, hi = best_phi + M_PI / coarse;
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = lo, b = hi;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = one_sided(x1), f2 = one_sided(x2);
            for (int it = 0; it < 40; ++it) {
                if (f1 < f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = one_sided(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = one_sided(x2);
                }
            }
            best_phi = 0.5 * (a + b);
            best_val = one_sided(best_phi);
        }
        rep.line_angle = best_phi;

        // symmetric Hausdorff: vertices -> line already in best_val; add
        // line-diameter samples -> polylines
        double c = std::cos(best_phi), sn = std::sin(best_phi);
        double d2 = 0.0;
        const int m = 65;
        for (int k = 0; k < m; ++k) {
            double t = -r + 2.0 * r * k / (m - 1);
            Point q{x0.x + t * c, x0.y + t * sn};
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& line : nodal.polylines) {
                for (std::size_t sidx = 0; sidx + 1 < line.size(); ++sidx) {
                    Point a = line[sidx], b = line[sidx + 1];
                    if (dist(a, x0) > r + g.h && dist(b, x0) > r + g.h) continue;
                    double vx = b.x - a.x, vy = b.y - a.y;
                    double L2 = vx * vx + vy * vy;
                    double tt = L2 > 0.0
                                    ? std::clamp(((q.x - a.x) * vx + (q.y - a.y) * vy) / L2, 0.0,
                                                 1.0)
                                    : 0.0;
                    double px = a.x + tt * vx, py = a.y + tt * vy;
                    dmin = std::min(dmin, std::hypot(q.x - px, q.y - py));
                }
            }
            if (std::isfinite(dmin)) d2 = std::max(d2, dmin);
        }
        rep.delta = std::min(std::max(best_val, d2) / r, 1.0);
        out.push_back(rep);
    }
    return out;
}

std::pair<ScalarField, ScalarField> split_component(const SegregatedConfig& U, int comp,
                                                    Point center, double radius,
                                                    double threshold) {
    const Grid2D& g = U.grid();
    if (!g.contains_ball(center, radius, 0.0))
        throw BallOutOfDomain("split_component region outside grid");
    const ScalarField& u = U.component(comp);

    std::vector<int> label(g.size(), -1);
    int next_label = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            std::size_t k = g.idx(i, j);
            if (label[k] >= 0) continue;
            if (u.values[k] <= threshold) continue;
            if (dist(g.node(i, j), center) > radius) continue;
            // BFS flood fill inside the ball
            std::vector<std::size_t> stack{k};
            label[k] = next_label;
            while (!stack.empty()) {
                std::size_t q = stack.back();
                stack.pop_back();
                int qi = static_cast<int>(q % g.nx), qj = static_cast<int>(q / g.nx);
                const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int ni = qi + di[d], nj = qj + dj[d];
                    if (ni < 0 || nj < 0 || ni >= g.nx || nj >= g.ny) continue;
                    std::size_t nk = g.idx(ni, nj);
                    if (label[nk] >= 0 || u.values[nk] <= threshold) continue;
                    if (dist(g.node(ni, nj), center) > radius) continue;
                    label[nk] = next_label;
                    stack.push_back(nk);
                }
            }
            ++next_label;
        }
    }
    if (next_label != 2)
        throw NotTwoComponents("split_component: region sees " + std::to_string(next_label) +
                               " pieces");
    ScalarField a(g), b(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (label[k] == 0) a.values[k] = u.values[k];
        if (label[k] == 1) b.values[k] = u.values[k];
    }
    return {a, b};
}

std::vector<Point> sample_polylines(const NodalSet& nodal, const Grid2D& grid, double spacing,
                                    double boundary_margin, double candidate_margin) {
    std::vector<Point> out;
    for (const auto& line : nodal.polylines) {
        double carry = 0.5 * spacing;
        for (std::size_t s = 0; s + 1 < line.size(); ++s) {
            Point a = line[s], b = line[s + 1];
            double L = dist(a, b);
            if (L == 0.0) continue;
            double t = carry;
            while (t < L) {
                Point p{a.x + (b.x - a.x) * t / L, a.y + (b.y - a.y) * t / L};
                t += spacing;
                if (boundary_distance(grid, p) < boundary_margin) continue;
                if (nodal.nearest_candidate_distance(p) < candidate_margin) continue;
                out.push_back(p);
            }
            carry = t - L;
        }
    }
    return out;
}

} // namespace seglab
