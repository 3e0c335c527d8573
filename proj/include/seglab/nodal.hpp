// Nodal set extraction and the free-boundary diagnostics: regular/singular
// classification by the frequency jump, the reflection law across interfaces,
// equal angles at singular points, and Reifenberg flatness.
#pragma once
#include <string>
#include <vector>

#include "seglab/almgren.hpp"
#include "seglab/config.hpp"

namespace seglab {

inline constexpr double kNStar = 1.25;  // regular/singular threshold on N(0+)

struct NodalSet {
    std::vector<std::vector<Point>> polylines;
    std::vector<Point> singular_candidates;
    double threshold = 0.0;

    bool empty() const { return polylines.empty(); }
    std::string to_geojson() const;
    double nearest_candidate_distance(Point p) const;
};

/// Zero-contours the signed dominance field (difference of the two locally
/// largest components) with marching squares; cells where three or more
/// components lead become singular candidates. Throws EmptyNodalSet when no
/// cell carries a sign change.
NodalSet extract_nodal_set(const SegregatedConfig& U, double dominance_threshold = 0.0);

struct SingularPointReport {
    Point location;
    double n0 = 0.0;  // extrapolated N(x, 0+)
    bool singular = false;
    int branch_count = 0;
    std::vector<double> branch_angles;  // sorted, radians
    double c_tilde = 0.0;
    double fit_r_lo = 0.0, fit_r_hi = 0.0;
};

struct ClassifyOptions {
    double r_cap = 0.0;        // 0: auto (quarter of the shortest half-extent)
    int n_radii = 12;
    double branch_radius_h = 10.0;  // branch-counting circle in units of h
};

SingularPointReport classify_point(const SegregatedConfig& U, const NodalSet& nodal, Point p,
                                   const ClassifyOptions& opts = {});
std::vector<SingularPointReport> classify_points(const SegregatedConfig& U,
                                                 const NodalSet& nodal,
                                                 const std::vector<Point>& points,
                                                 const ClassifyOptions& opts = {});

struct ReflectionReport {
    double mismatch = 0.0;  // |g+ - g-| / max(g+, g-)
    double g_plus = 0.0;    // one-sided gradient moduli extrapolated to the interface
    double g_minus = 0.0;
    bool nondegenerate = false;
    Point normal;
};

/// Compares the one-sided gradient moduli across the interface at x0, probing
/// at distances s and 2s along the local normal and extrapolating linearly to
/// the interface. Requires x0 at least 10h away from singular candidates.
ReflectionReport reflection_check(const SegregatedConfig& U, const NodalSet& nodal, Point x0,
                                  double probe_distance = 0.0);

/// Max deviation of consecutive branch-angle gaps from 2 pi / k (radians).
double equal_angle_check(const SingularPointReport& report);

struct FlatnessReport {
    Point center;
    double radius = 0.0;
    double line_angle = 0.0;  // best line through the center
    double delta = 0.0;       // normalized symmetric Hausdorff distance
};

std::vector<FlatnessReport> flatness_scan(const SegregatedConfig& U, const NodalSet& nodal,
                                          Point x0, const std::vector<double>& radii);

/// Splits component i into its two connected pieces inside the ball, each
/// extended by zero. Throws NotTwoComponents unless the ball sees exactly two.
std::pair<ScalarField, ScalarField> split_component(const SegregatedConfig& U, int comp,
                                                    Point center, double radius,
                                                    double threshold = 0.0);

/// Arc-length-equispaced samples along the polylines, keeping a safety margin
/// from the grid boundary and from singular candidates.
std::vector<Point> sample_polylines(const NodalSet& nodal, const Grid2D& grid, double spacing,
                                    double boundary_margin, double candidate_margin);

} // namespace seglab
