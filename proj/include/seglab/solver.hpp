// Produces segregated configurations: steady states of the Gross-Pitaevskii
// and Lotka-Volterra competition systems by semi-implicit parabolic
// relaxation with beta-continuation, plus exact analytic prototypes.
#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "seglab/config.hpp"

namespace seglab {

struct CompetitionParams {
    int h = 0;
    std::vector<double> lambda;               // lambda_i
    std::vector<double> omega;                // omega_i
    double beta = 0.0;                        // overall competition strength
    std::vector<std::vector<double>> beta_ij; // symmetric, zero diagonal

    static CompetitionParams symmetric(int h, double beta, double lambda = 0.0,
                                       double omega = 0.0);
    void validate() const;
};

struct BoundarySpec {
    enum class Mode { ZeroDirichlet, TraceDirichlet };
    Mode mode = Mode::ZeroDirichlet;
    std::vector<ScalarField> traces;  // per component; only the boundary ring is read

    static BoundarySpec zero();
    static BoundarySpec trace(const Grid2D& grid,
                              const std::vector<std::function<double(double, double)>>& fns);
    void validate(const Grid2D& grid, int h) const;
    double trace_value(int comp, int i, int j) const;
};

struct SolveReport {
    double final_defect = 0.0;  // max-norm steady-state defect
    int iterations = 0;
    double overlap = 0.0;       // beta-weighted penalty integral of E_beta
    double raw_overlap = 0.0;   // the same integral without the beta factor
    double energy = 0.0;        // variational functional at the final state
    double clipped_mass = 0.0;  // total mass removed by the positivity clip
    double dt_final = 0.0;
    int dt_halvings = 0;
    bool converged = false;
};

struct SolveOptions {
    double tol = 1e-6;
    int max_iters = 200000;
    double dt0 = 4e-3;
    double inner_tol = 1e-10;
    int inner_max_sweeps = 20000;
    double blowup_factor = 10.0;
    unsigned seed = 1;
    bool random_init = false;  // default: discrete harmonic extension of the traces
};

struct SolveResult {
    SegregatedConfig config;
    SolveReport report;
};

SolveResult solve_gp(const CompetitionParams& params, const BoundarySpec& bc, const Grid2D& grid,
                     const std::optional<std::vector<ScalarField>>& init,
                     const SolveOptions& opts = {});

SolveResult solve_lv(const ReactionSpec& f_spec, double beta, const BoundarySpec& bc,
                     const Grid2D& grid, const std::optional<std::vector<ScalarField>>& init,
                     const SolveOptions& opts = {});

struct ContinuationResult {
    std::vector<SolveResult> stages;     // one per ladder entry
    std::vector<double> overlaps;        // raw overlap per stage
    double final_eps_seg = 0.0;
};

/// Warm-started sweep over an increasing beta ladder. kind_gp = false runs the
/// Lotka-Volterra system with the given reaction.
ContinuationResult beta_continuation(bool kind_gp, const CompetitionParams& gp_params,
                                     const ReactionSpec& lv_reaction,
                                     const std::vector<double>& beta_ladder,
                                     const BoundarySpec& bc, const Grid2D& grid,
                                     const SolveOptions& opts = {});

/// Exact sampled prototype |r^{m/2} cos(m theta / 2)| split into sector
/// components. assignment maps sector k (centered at angle 2 pi k / m) to a
/// component index; adjacent sectors must map to distinct components. Empty
/// assignment means the identity (m components).
SegregatedConfig make_prototype(int m, const Grid2D& grid,
                                const std::vector<int>& assignment = {});

struct ClassSReport {
    double subsolution_violation = 0.0;   // most positive  -Lap u_i - f_i(u_i)
    double supersolution_violation = 0.0; // most positive -(-Lap w_i - f_i + sum f_j)
};

/// Checks the two distributional inequalities of the segregated class on the
/// 3x3-mollified discrete residuals.
ClassSReport class_s_check(const SegregatedConfig& U);

} // namespace seglab
