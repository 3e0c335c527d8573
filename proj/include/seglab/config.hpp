// Segregated vector configurations U = (u_1, ..., u_h) and their defect
// measure. Construction precomputes every per-node density the frequency
// machinery integrates, so evaluation afterwards is read-only.
#pragma once
#include <memory>
#include <vector>

#include "seglab/calculus.hpp"
#include "seglab/grid.hpp"
#include "seglab/reaction.hpp"

namespace seglab {

inline constexpr double kNegTol = 1e-10;        // nonnegativity slack per node
inline constexpr double kSegOverlapTol = 1e-3;  // default eps_seg acceptance

struct ConfigValidation {
    bool ok = false;
    double min_value = 0.0;     // most negative node value over all components
    double eps_seg = 0.0;       // max_{i<j} integral(u_i u_j) / integral(U^2)
    double mass = 0.0;          // integral of U^2 over the grid
    bool nonnegative = false;
    bool segregated = false;
    bool nontrivial = false;
};

class SegregatedConfig {
public:
    SegregatedConfig(std::vector<ScalarField> components, ReactionSpec reaction);

    const Grid2D& grid() const { return grid_; }
    int h_components() const { return static_cast<int>(components_.size()); }
    const ScalarField& component(int i) const { return components_[i]; }
    const std::vector<ScalarField>& components() const { return components_; }
    const ReactionSpec& reaction() const { return reaction_; }

    /// Support-aware gradient of component i.
    const VectorField& component_gradient(int i) const { return gradients_[i]; }

    /// Node density |grad U|^2 combined across components: the sum over
    /// positive components, or the steepest one-sided value on the nodal set.
    const ScalarField& dirichlet_density() const { return dirichlet_density_; }

    /// Node density sum_i f_i(u_i) u_i.
    const ScalarField& reaction_density() const { return reaction_density_; }

    /// Node density U^2 = sum_i u_i^2.
    const ScalarField& square_density() const { return square_density_; }

    /// Node values f_i(u_i).
    const ScalarField& reaction_value(int i) const { return reaction_values_[i]; }

    double sup_norm() const { return sup_norm_; }
    /// Lipschitz estimate: max over nodes of |grad U|.
    double lip_estimate() const { return lip_estimate_; }
    double d_bound() const { return reaction_.d_bound(sup_norm_); }

    ConfigValidation validate(double eps_seg_tol = kSegOverlapTol) const;

    /// Per-node leading component (-1 where all components <= floor).
    std::vector<int> leader_labels(double floor = 0.0) const;

    /// Quasi-euclidean node distance (in physical units) to the leader
    /// interface: nodes whose 4-neighborhood contains a different leader.
    std::vector<double> interface_distance(double floor = 0.0) const;

    SegregatedConfig scaled(double rho) const;

private:
    Grid2D grid_;
    std::vector<ScalarField> components_;
    ReactionSpec reaction_;
    std::vector<VectorField> gradients_;
    std::vector<ScalarField> reaction_values_;
    ScalarField dirichlet_density_;
    ScalarField reaction_density_;
    ScalarField square_density_;
    double sup_norm_ = 0.0;
    double lip_estimate_ = 0.0;
};

/// Discrete defect mu_i = f_i(u_i) + Delta_h u_i at interior nodes (NaN on the
/// boundary ring), the object playing the role of the concentrated measures.
struct ResidualMeasure {
    std::vector<ScalarField> residuals;
    double min_value = 0.0;  // most negative residual over interior nodes

    /// Fraction of the total |residual| mass at interior nodes farther than
    /// band (physical distance) from the leader interface.
    double far_mass_fraction(const SegregatedConfig& config, double band) const;
};

ResidualMeasure residual_measure(const SegregatedConfig& config);

} // namespace seglab
