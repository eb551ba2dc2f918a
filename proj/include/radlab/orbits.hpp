#pragma once

/// @file orbits.hpp
/// @brief Regular solutions, manifold seeds, heteroclinic shooting, the
/// central-manifold profile of the doubly critical case and eigen-rate checks.

#include <optional>
#include <string>
#include <vector>

#include "radlab/charts.hpp"
#include "radlab/equilibria.hpp"

namespace radlab {

/// Sampled radial profile (r, u, u').
struct RadialProfile {
    std::vector<double> r, u, du;
    std::optional<double> blowup_radius;
    Event event;  ///< event in the r variable (t holds r)
};

/// Solution with u(0) = a, u'(0) = 0, integrated in r until blow-up or r_max.
RadialProfile regular_solution(double a, const ProblemParams& prm, double r_max = 1e6,
                               const IntegrateOptions& opts = {});

/// eq.location + side * epsilon * v / |v| for the eigenvector at eig_index.
/// epsilon <= 0 selects 1e-6 * max(1, |location|).
State manifold_seed(const EquilibriumReport& eq, std::size_t eig_index, double epsilon, int side);

struct ShootOptions {
    double seed_radius = 0;  ///< circle radius around a node source; 0 selects 1e-7 * max(1, |source|)
    int n_angles = 72;
    int max_bisections = 200;
    double t_max = 400;
    double tol_connect = 1e-6;  ///< scaled by max(1, |target|)
    double back_seed = 1e-8;    ///< offset along the target's stable direction
    IntegrateOptions integ;
};

struct Connection {
    double angle = 0;
    double closest_approach = 0;
    int bisection_iterations = 0;
};

struct ShootResult {
    bool success = false;
    std::string status;  ///< "success" or "no_connection_found"
    EquilibriumReport source;
    EquilibriumReport target;
    Trajectory trajectory;                   ///< connecting orbit in increasing t
    std::optional<Trajectory> shot;          ///< forward orbit from the bisected seed angle
    std::optional<Trajectory> confirmation;  ///< backward orbit from the target
    double terminal_distance = 0;
    double closest_approach = 0;
    int bisection_iterations = 0;
    std::optional<double> angle;          ///< bisected seed angle (node source)
    std::optional<double> angle_mismatch; ///< against the backward orbit
    std::vector<Connection> connections;  ///< confirmed connections; closest_approach holds the terminal gap
    double seconds = 0;
};

/// Connection between two equilibria of the planar chart.
ShootResult shoot_connection(const EquilibriumReport& source, const EquilibriumReport& target,
                             const ProblemParams& prm, const ShootOptions& opts = {});

struct CentralManifoldResult {
    Trajectory trajectory;  ///< planar chart, increasing t
    double t_min = 0, t_max = 0;
};

/// Stable manifold of P_M in the doubly critical case p = N/(N-2), q = N/(N-1),
/// integrated backward to t_min and forward to t_max. Forward runs much past
/// t = 5 are dominated by rounding growth along the unstable direction.
CentralManifoldResult central_manifold_profile(const ProblemParams& prm, double t_min = -2e4,
                                               double t_max = 5);

struct EigenRateResult {
    double ell = 0;
    double residual = 0;  ///< relative drift of the rescaled component over the window
    std::size_t window_points = 0;
};

/// Limit of e^{-mu t} times the component along eigenvector eig_index as t -> -inf.
EigenRateResult eigen_rate_check(const Trajectory& traj, const EquilibriumReport& eq,
                                 std::size_t eig_index, double window_radius = 1e-3);

}  // namespace radlab
