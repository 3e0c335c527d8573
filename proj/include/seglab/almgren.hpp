// Frequency-function machinery: the ball energy E, boundary average H, the
// quotient N = E/H, the Pohozaev-type remainder R, and the monotonicity,
// doubling and log-derivative diagnostics built on them.
#pragma once
#include <string>
#include <vector>

#include "seglab/config.hpp"

namespace seglab {

inline constexpr int kDim = 2;            // ambient dimension of the experiments
inline constexpr double kAverageFloor = 1e-30;  // underflow guard on H
inline constexpr double kMonotoneSlack = 1e-2;  // relative slack for monotonicity
inline constexpr double kCTildeMax = 1e3;       // search ceiling for C~

/// E(x0,U,r) = r^-(N-2) * integral over B_r of (|grad U|^2 - <F(U),U>).
double energy(const SegregatedConfig& U, Point x0, double r);

/// H(x0,U,r) = r^-(N-1) * integral over the circle of U^2.
double average(const SegregatedConfig& U, Point x0, double r);

/// N = E/H. Throws DegenerateAverage when H falls under the floor.
double frequency(const SegregatedConfig& U, Point x0, double r);

/// R(x0,U,r): the reaction remainder in the derivative of E. Zero when F = 0.
double pohozaev_remainder(const SegregatedConfig& U, Point x0, double r);

struct FrequencyProfile {
    Point center;
    std::vector<double> radii;  // increasing
    std::vector<double> E, H, N, R;

    std::size_t size() const { return radii.size(); }
    std::string to_csv() const;  // columns r,E,H,N,R
};

/// E,H,N,R at n geometrically spaced radii in [r_min, r_max].
FrequencyProfile frequency_profile(const SegregatedConfig& U, Point x0, double r_min,
                                   double r_max, int n_radii);

struct MonotonicityReport {
    double c_tilde = 0.0;        // smallest constant making e^{C r}(N+1) nondecreasing
    double max_violation = 0.0;  // residual violation at the fitted constant
    double n0 = 0.0;             // extrapolated N(x0, 0+)
    double fit_r_lo = 0.0;       // extrapolation window
    double fit_r_hi = 0.0;
    double d_bound = 0.0;
    bool pass = false;
    // False when the profile needed C~ > 0 although the declared reaction
    // vanishes (with F = 0 the quotient itself must be nondecreasing).
    bool zero_reaction_monotone = true;
};

/// Fits the smallest C~ >= 0 (bisection to 1e-4) making e^{C~ r}(N(r)+1)
/// nondecreasing up to relative slack 1e-2, and extrapolates N(0+) by a
/// linear fit over the smallest-radius third of the profile. Throws
/// NonMonotone when no C~ <= 1e3 works.
MonotonicityReport monotonicity_check(const FrequencyProfile& profile, double d_bound);

/// Linear-fit extrapolation of N to r = 0 over the smallest-radius third.
double extrapolate_n0(const FrequencyProfile& profile, double* r_lo = nullptr,
                      double* r_hi = nullptr);

struct DoublingReport {
    double ratio = 0.0;  // H(r2)/H(r1)
    double bound = 0.0;  // (r2/r1)^(2 Cbar), Cbar = (C+1) e^{C~ r2} - 1
    double c_bar = 0.0;
    bool pass = false;
};

DoublingReport doubling_check(const SegregatedConfig& U, Point x0, double r1, double r2,
                              double c_tilde, double rel_slack = 1e-2);

/// Max relative residual of d/dr log H = 2N/r over interior profile radii
/// (compared in log-log form; denominator floored at 0.1 to keep near-zero
/// frequencies meaningful).
double log_derivative_identity_check(const FrequencyProfile& profile);

/// JSON metadata block accompanying a profile CSV.
std::string profile_metadata_json(const FrequencyProfile& profile,
                                  const MonotonicityReport& report);

} // namespace seglab
