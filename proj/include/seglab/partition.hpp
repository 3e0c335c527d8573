// Optimal-partition machinery: first Dirichlet eigenvalues on masked regions
// and the penalized eigenvalue minimization for the p-mean / max objectives.
#pragma once
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "seglab/config.hpp"

namespace seglab {

inline constexpr double kPInfinity = std::numeric_limits<double>::infinity();

/// Node mask with per-arm cut fractions toward the region boundary. An arm
/// fraction t in (0,1] is the portion of the lattice edge lying inside the
/// region (1 when the neighbor is inside); the 5-point operator uses the
/// boundary-fitted Shortley-Weller spacings, which keeps masked-domain
/// eigenvalues second-order accurate.
struct RegionMask {
    Grid2D grid;
    std::vector<std::uint8_t> inside;
    std::vector<double> tE, tW, tN, tS;

    std::size_t interior_count() const;

    /// Whole lattice interior; Dirichlet on the boundary ring.
    static RegionMask full_interior(const Grid2D& grid);
    /// Region {sdf < 0}; arm cuts located by bisection on the sdf.
    static RegionMask from_sdf(const Grid2D& grid, const std::function<double(double, double)>& sdf);
    /// Region {labels == target} inside a parent mask; cuts at label changes
    /// sit halfway between nodes.
    static RegionMask from_labels(const RegionMask& parent, const std::vector<int>& labels,
                                  int target);
};

inline double disk_sdf(double x, double y, double cx, double cy, double R) {
    return std::hypot(x - cx, y - cy) - R;
}

struct EigenResult {
    double lambda = 0.0;
    ScalarField eigenfunction;  // positive, unit discrete L2 norm
    int iterations = 0;
};

/// First Dirichlet eigenvalue by inverse power iteration; Rayleigh-quotient
/// tolerance 1e-8. Throws EmptyRegion for regions under 9 interior nodes.
EigenResult lambda1(const RegionMask& region);

struct Partition {
    Grid2D grid;
    std::vector<int> labels;  // 0 = unassigned/boundary layer, 1..h = parts
    std::vector<double> lambda1s;             // exact per-part eigenvalues
    std::vector<ScalarField> eigenfunctions;  // unit L2, zero-extended
    std::vector<double> relaxed_lambdas;      // penalized Rayleigh at final beta
    double p = 1.0;
    double objective = 0.0;
    std::vector<double> stage_objectives;  // relaxed objective per beta stage
    unsigned seed_used = 0;
    int restarts = 0;

    std::string labels_csv() const;       // columns i,j,label
    std::string parts_json(const std::vector<double>& scales) const;
};

struct PartitionOptions {
    int starts = 5;
    int max_outer = 160;
    double inner_tol = 1e-8;
    int inner_max_sweeps = 4000;
    double sor_omega = 1.5;
    double outer_tol = 1e-7;
};

/// Penalized relaxation of the optimal partition problem: per beta stage, one
/// inverse-power step per component for -Lap + beta sum_j w_j u_j^2, with the
/// p-dependent weights (p < inf: lambda^(p-1); p = inf: annealed softmax).
/// Multi-start keeps the best objective; collapsed components restart with a
/// fresh seed and are reported.
Partition optimize_partition(int h, double p, const RegionMask& domain,
                             const std::vector<double>& beta_ladder, unsigned seed,
                             const PartitionOptions& opts = {});

/// (1/h sum lambda_i^p)^(1/p), or max for p = infinity.
double partition_objective(const std::vector<double>& lambdas, double p);

struct PartitionConfigResult {
    SegregatedConfig config;
    std::vector<double> scales;  // the a_i
};

/// Rescaled eigenfunctions a_i phi_i with the a_i fixed by least-squares
/// matching of the one-sided normal derivatives across shared interfaces;
/// records the reaction f_i(s) = lambda1_i * s.
PartitionConfigResult partition_to_config(const Partition& partition);

} // namespace seglab
