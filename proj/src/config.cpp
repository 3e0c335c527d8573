#include "seglab/config.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "seglab/kernels.hpp"

namespace seglab {

SegregatedConfig::SegregatedConfig(std::vector<ScalarField> components, ReactionSpec reaction)
    : components_(std::move(components)), reaction_(std::move(reaction)) {
    if (components_.empty()) throw Error("SegregatedConfig: no components");
    grid_ = components_[0].grid;
    for (const auto& c : components_) {
        if (!c.grid.same_geometry(grid_))
            throw Error("SegregatedConfig: component grids disagree");
        if (!c.all_finite()) throw Error("SegregatedConfig: non-finite component values");
    }
    if (reaction_.size() != components_.size())
        throw Error("SegregatedConfig: reaction arity mismatch");

    const std::size_t n = grid_.size();
    const int h = h_components();
    gradients_.reserve(h);
    for (int i = 0; i < h; ++i) gradients_.push_back(support_aware_gradient(components_[i]));

    dirichlet_density_ = ScalarField(grid_);
    reaction_density_ = ScalarField(grid_);
    square_density_ = ScalarField(grid_);
    reaction_values_.assign(h, ScalarField(grid_));

    double sup = 0.0, lip2 = 0.0;
#pragma omp parallel for schedule(static) reduction(max : sup, lip2)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
        double dir_sum = 0.0, dir_max = 0.0, react = 0.0, sq = 0.0;
        bool any_positive = false;
        for (int i = 0; i < h; ++i) {
            const double u = components_[i].values[k];
            const double g2 = gradients_[i].norm2_at(k);
            const double fv = reaction_[i].value(std::max(u, 0.0));
            reaction_values_[i].values[k] = fv;
            sq += u * u;
            react += fv * u;
            dir_max = std::max(dir_max, g2);
            if (u > 0.0) {
                any_positive = true;
                dir_sum += g2;
            }
            sup = std::max(sup, std::abs(u));
        }
        const double dir = any_positive ? dir_sum : dir_max;
        dirichlet_density_.values[k] = dir;
        reaction_density_.values[k] = react;
        square_density_.values[k] = sq;
        lip2 = std::max(lip2, dir);
    }
    sup_norm_ = sup;
    lip_estimate_ = std::sqrt(lip2);
}

ConfigValidation SegregatedConfig::validate(double eps_seg_tol) const {
    ConfigValidation v;
    const std::size_t n = grid_.size();
    const int h = h_components();
    double min_v = 0.0;
    for (int i = 0; i < h; ++i)
        for (std::size_t k = 0; k < n; ++k) min_v = std::min(min_v, components_[i].values[k]);
    v.min_value = min_v;
    v.nonnegative = min_v >= -kNegTol;

    const double cell = grid_.h * grid_.h;
    v.mass = kernels::det_sum(square_density_.values) * cell;
    v.nontrivial = v.mass > 0.0;

    double worst = 0.0;
    std::vector<double> prod(n);
    for (int i = 0; i < h; ++i) {
        for (int j = i + 1; j < h; ++j) {
            for (std::size_t k = 0; k < n; ++k)
                prod[k] = std::max(components_[i].values[k], 0.0) *
                          std::max(components_[j].values[k], 0.0);
            worst = std::max(worst, kernels::det_sum(prod) * cell);
        }
    }
    v.eps_seg = v.mass > 0.0 ? worst / v.mass : 0.0;
    v.segregated = v.eps_seg <= eps_seg_tol;
    v.ok = v.nonnegative && v.segregated && v.nontrivial;
    return v;
}

std::vector<int> SegregatedConfig::leader_labels(double floor) const {
    const std::size_t n = grid_.size();
    std::vector<int> lab(n, -1);
    const int h = h_components();
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
        double best = floor;
        int who = -1;
        for (int i = 0; i < h; ++i) {
            const double u = components_[i].values[k];
            if (u > best) {
                best = u;
                who = i;
            }
        }
        lab[k] = who;
    }
    return lab;
}

std::vector<double> SegregatedConfig::interface_distance(double floor) const {
    const auto lab = leader_labels(floor);
    const int nx = grid_.nx, ny = grid_.ny;
    const std::size_t n = grid_.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            std::size_t k = grid_.idx(i, j);
            bool iface = false;
            if (i + 1 < nx && lab[k] != lab[k + 1]) iface = true;
            if (j + 1 < ny && lab[k] != lab[k + nx]) iface = true;
            if (i > 0 && lab[k] != lab[k - 1]) iface = true;
            if (j > 0 && lab[k] != lab[k - nx]) iface = true;
            if (iface) {
                dist[k] = 0.0;
                q.push({0.0, k});
            }
        }
    }
    const double diag = grid_.h * std::sqrt(2.0);
    while (!q.empty()) {
        auto [d, k] = q.top();
        q.pop();
        if (d > dist[k]) continue;
        int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0) continue;
                int ii = i + di, jj = j + dj;
                if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                std::size_t kk = grid_.idx(ii, jj);
                double nd = d + (di != 0 && dj != 0 ? diag : grid_.h);
                if (nd < dist[kk]) {
                    dist[kk] = nd;
                    q.push({nd, kk});
                }
            }
        }
    }
    return dist;
}

SegregatedConfig SegregatedConfig::scaled(double rho) const {
    std::vector<ScalarField> comps = components_;
    for (auto& c : comps)
        for (auto& v : c.values) v *= rho;
    return SegregatedConfig(std::move(comps), reaction_);
}

ResidualMeasure residual_measure(const SegregatedConfig& config) {
    ResidualMeasure out;
    const Grid2D& g = config.grid();
    double min_v = 0.0;
    for (int i = 0; i < config.h_components(); ++i) {
        ScalarField res = laplacian(config.component(i));
        for (int j = 1; j < g.ny - 1; ++j) {
            for (int ii = 1; ii < g.nx - 1; ++ii) {
                double v = res.at(ii, j) + config.reaction_value(i).at(ii, j);
                res.at(ii, j) = v;
                min_v = std::min(min_v, v);
            }
        }
        out.residuals.push_back(std::move(res));
    }
    out.min_value = min_v;
    return out;
}

double ResidualMeasure::far_mass_fraction(const SegregatedConfig& config, double band) const {
    const Grid2D& g = config.grid();
    const auto dist = config.interface_distance();
    double total = 0.0, far = 0.0;
    for (const auto& res : residuals) {
        for (int j = 1; j < g.ny - 1; ++j) {
            for (int i = 1; i < g.nx - 1; ++i) {
                double m = std::abs(res.at(i, j));
                total += m;
                if (dist[g.idx(i, j)] > band) far += m;
            }
        }
    }
    return total > 0.0 ? far / total : 0.0;
}

} // namespace seglab
