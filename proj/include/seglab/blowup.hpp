// Rescaled normalized frames U(x0 + t x)/rho, the scaling identities relating
// their E/H/N to the source, and the spherical-arc classification of
// homogeneity degrees.
#pragma once
#include <vector>

#include "seglab/config.hpp"

namespace seglab {

struct BlowupFrame {
    Point x0;
    double t = 0.0;
    double rho = 0.0;    // sqrt(H(x0, U, t))
    double alpha = 0.0;  // homogeneity estimate from the log H slope
    SegregatedConfig config;  // lives on the reference window [-2,2]^2
};

/// Resamples U(x0 + t y)/rho on the reference window. rho^2 = H(x0,U,t), so
/// H(0, frame, 1) = 1 up to resampling error.
BlowupFrame make_frame(const SegregatedConfig& U, Point x0, double t);

struct ScalingResiduals {
    double e = 0.0, h = 0.0, n = 0.0;
};

/// Relative residuals of E(y0,V,r) = E(x0+t y0, U, t r)/rho^2 (and H, N).
ScalingResiduals scaling_identity_check(const SegregatedConfig& U, Point x0, double t, Point y0,
                                        double r);

struct Arc {
    double start = 0.0;   // radians
    double length = 0.0;  // radians
    int component = -1;
};

struct SphericalTrace {
    std::vector<double> angles;
    std::vector<std::vector<double>> values;  // per component, per angle
    std::vector<Arc> arcs;
};

/// Samples the frame on the circle of radius r and splits it into positivity
/// arcs at the dominance sign changes (linear angle interpolation).
SphericalTrace spherical_trace(const BlowupFrame& frame, double r = 1.0, int n_angles = 1440);

struct SphericalClassification {
    std::vector<double> lengths;
    std::vector<double> lambdas;  // (pi / length)^2
    std::vector<double> alphas;   // degree with lambda = alpha (alpha + N - 2)
    bool consensus = false;       // all lambdas within 5% of their mean
    int arc_count = 0;
    double min_alpha = 0.0;
};

/// Arc eigenvalue classification: lambda_1 of an arc of length L is (pi/L)^2.
SphericalClassification classify_trace(const SphericalTrace& trace);

/// Max over r in [0.2, 1.5] of |N(0, frame, r) - alpha|.
double homogeneity_residual(const BlowupFrame& frame);

/// Pairwise max-norm differences on the unit ball between frames at the given
/// decreasing scales.
std::vector<double> frame_convergence(const SegregatedConfig& U, Point x0,
                                      const std::vector<double>& t_schedule);

} // namespace seglab
