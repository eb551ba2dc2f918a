#pragma once

/// @file asymptotics.hpp
/// @brief Fits of sampled profiles against the behaviour-law catalog, the
/// eikonal expansion coefficient and the Hardy-type limit.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radlab/charts.hpp"
#include "radlab/closed_forms.hpp"
#include "radlab/params.hpp"

namespace radlab {

/// Sampled radial profile, stored as (ln r, ln u) so that orbits reaching
/// far into either end stay representable.
struct Samples {
    std::vector<double> log_r, log_u;
};

Samples samples_from_profile(const Profile& prof, const std::vector<double>& r_grid);
/// Reconstructs (r, u) along a chart trajectory.
Samples samples_from_trajectory(const Trajectory& traj);

struct FitOptions {
    /// Fraction of the window span excluded next to the end (use 0.05 when an event ends the data there).
    double trim = 0.0;
};

struct FitResult {
    LawTemplate shape = LawTemplate::power;
    double a = 0, b = 0;
    double constant = 0;           ///< multiplicative constant with the template exponents fixed
    double exponent_residual = 0;  ///< mismatch of the ln r coefficient of the free regression
    double slope_r = 0;            ///< free regression coefficient of ln r
    double slope_logr = 0;         ///< free regression coefficient of ln|ln r| (log templates)
    double log_exponent_residual = 0;  ///< mismatch of the ln|ln r| coefficient (log templates)
    double window_lo = 0, window_hi = 0;  ///< radii bounding the fit window
    std::size_t n_points = 0;
};

/// Least-squares fit of the template over the final decade toward the end
/// (in r for power laws, in |ln r| for log-corrected laws).
FitResult fit_law(const Samples& s, LawEnd end, LawTemplate shape, double a, double b,
                  const FitOptions& opts = {});
FitResult fit_law(const Samples& s, const AsymptoticLaw& law, const FitOptions& opts = {});

struct LawFit {
    AsymptoticLaw law;
    FitResult fit;
    bool matched = false;
    std::optional<double> constant_error;  ///< relative error against a pinned constant
};

struct Classification {
    bool classified = false;
    std::optional<AsymptoticLaw> law;
    std::vector<LawFit> candidates;
};

struct ClassifyOptions {
    double slope_tol = 1e-2;
    double constant_tol = 0.05;
    double log_constant_tol = 0.10;
    double log_exponent_tol = 0.10;  ///< on the ln|ln r| coefficient
    FitOptions fit;
};

/// Best match among the laws that classify_regime admits at this end.
Classification classify_behavior(const Samples& s, LawEnd end, const ProblemParams& prm,
                                 const ClassifyOptions& opts = {});

struct ExpansionResult {
    double fitted = 0;
    double predicted = 0;
    std::optional<double> predicted_q2;  ///< closed form available when q = 2
    double rel_error = 0;
    int sign = 0;             ///< sign of X - X_M on the window
    bool sign_matches = false;  ///< sign equals sign(theta)
    double t_lo = 0, t_hi = 0;
    std::size_t n_points = 0;
    int bisections = 0;
};

/// Coefficient of e^{sigma t/(p-q)} in X(t) - X_M along the eikonal-chart solution
/// converging to (X_M, gamma X_M), compared with theta gamma^{1-q} X_M^{2-q}/(p(q-1)M).
ExpansionResult verify_expansion(const ProblemParams& prm);

struct HardyResult {
    double n = 0;
    double limit = 0;      ///< fitted limit of t^{1/(n-1)} theta(t)
    double predicted = 0;  ///< (1/(n-1))^{1/(n-1)}
    double theta0 = 0, dtheta0 = 0;  ///< data at t = 0 from the backward run
    double shot_dtheta0 = 0;         ///< bisected slope at 0 for a forward decaying orbit
    double shoot_mismatch = 0;       ///< |shot_dtheta0 - dtheta0|
    double shift_lo = 0, shift_hi = 0;  ///< range of t0 with theta = ((n-1)(t+t0))^{-1/(n-1)} on the fit window
    std::vector<double> t, theta, dtheta;
    /// Dense evaluation (theta, theta') at t, re-integrating from the nearest stored point.
    std::function<std::pair<double, double>(double)> eval;
};

/// Decaying solution of theta'' - theta' - theta^n = 0 on [0, inf).
HardyResult hardy_limit(double n);

/// Normalized residual of theta'' - theta' - theta^n from a 5-point stencil on eval.
double hardy_residual(const HardyResult& h, double t, double rel_step = 1e-4);

}  // namespace radlab
