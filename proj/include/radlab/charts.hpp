#pragma once

/// @file charts.hpp
/// @brief Vector fields of the radial reductions, the adaptive integrator with
/// event handling, chart transfers and the Lyapunov/slope diagnostics.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radlab/params.hpp"

namespace radlab {

using State = std::vector<double>;

/// Dynamical charts. All use t = ln r.
///  planar        (x, y): u = r^{-alpha} x, u' = -r^{-alpha-1} y, autonomous (q = 2p/(p+1))
///  emden         (x, y): same scaling, any q
///  riccati       (xi, eta): exponent beta
///  eikonal       (X, Y): exponent gamma
///  order3        (X, xi, S) with S = -r u'/u
///  order3_desing (X^{p-q}, xi^{q-1}, S)
enum class Chart { planar, emden, riccati, eikonal, order3, order3_desing };

struct ChartInfo {
    Chart chart;
    std::string name;
    int dimension;
    bool autonomous;
};

ChartInfo chart_info(Chart c);
const char* to_string(Chart c);
/// Parses a chart name; throws DomainError on an unknown name.
Chart chart_from_string(const std::string& s);

/// Scaling exponent a of the chart, u = r^{-a} * (first component).
double chart_exponent(Chart c, const ProblemParams& prm);

/// Exponent k in the chart's non-autonomous factor e^{k t} (0 for autonomous charts).
double chart_time_rate(Chart c, const ProblemParams& prm);

/// Right-hand side of the chart at (t, state).
State chart_rhs(Chart c, double t, const State& s, const ProblemParams& prm);

enum class EventKind {
    reached_t_end,
    converged_to_equilibrium,
    blow_up,
    x_axis_crossing,
    left_domain,
    integration_failure
};
const char* to_string(EventKind k);

struct Event {
    EventKind kind = EventKind::reached_t_end;
    double t = 0;                ///< refined event time (extrapolated for blow_up)
    State state;                 ///< state at the event (last valid state for failures)
    std::optional<State> point;  ///< equilibrium reached, for converged_to_equilibrium
    std::string detail;
};

struct Trajectory {
    Chart chart = Chart::planar;
    std::vector<double> t;
    std::vector<State> states;
    Event event;
    ProblemParams params;
};

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double blowup_threshold = 1e8;
    int blowup_steps = 3;
    double conv_tol = 1e-9;
    double conv_window = 5.0;
    std::vector<State> equilibria;  ///< candidates for convergence detection
    double event_tol = 1e-10;
    long max_steps = 2000000;
    double h0 = 1e-3;
    double max_step = 0;  ///< largest step in |t|; 0 leaves it unbounded
    bool detect_axis = true;  ///< stop when the first component leaves (0, inf)
    /// Optional user stop function: integration ends with left_domain when it changes sign.
    std::function<double(double, const State&)> stop_fn;
    std::string stop_detail = "user stop condition";
};

using Field = std::function<void(const State&, State&, double)>;

/// Generic integration of y' = f(t, y) with the event machinery of this module.
/// t1 may be +-infinity; the t-range can be capped by opts via stop_fn.
Trajectory integrate_field(const Field& f, const State& initial, double t0, double t1,
                           const IntegrateOptions& opts);

/// Integrates a chart. Non-autonomous charts stop with left_domain once the
/// exponential factor would leave [e^-700, e^700].
Trajectory integrate(Chart c, const State& initial, double t0, double t1, const ProblemParams& prm,
                     const IntegrateOptions& opts = {});

/// Pointwise change of variables between charts. The reconstructed profile is unchanged.
Trajectory chart_transfer(const Trajectory& traj, Chart target);

/// Single-state version of chart_transfer.
State transfer_state(Chart from, Chart to, double t, const State& s, const ProblemParams& prm);

/// Reconstructed (r, u, u') at one state.
struct RadialPoint {
    double r = 0, u = 0, du = 0;
};
RadialPoint reconstruct(Chart c, double t, const State& s, const ProblemParams& prm);

struct Diagnostics {
    std::vector<double> t;
    std::vector<double> E;  ///< Lyapunov function, eikonal chart only
    std::vector<std::optional<double>> S;
    double C2 = 0;
    bool monotone = false;     ///< E - C2 e^{sigma t/(p-q)} non-increasing in t
    double worst_increase = 0;
};

/// E, S and the corrected monotonicity check. E is evaluated after transferring
/// to the eikonal chart when gamma is defined.
Diagnostics diagnostics(const Trajectory& traj);

struct AprioriReport {
    bool pass = true;
    double max_u_slope = 0;      ///< largest secant decay exponent of u on r <= 1
    double max_du_slope = 0;     ///< same for |u'|
    double bound_u = 0;          ///< max(gamma, alpha)
    double bound_du = 0;         ///< max(gamma, alpha) + 1
    std::optional<double> violating_r;
};

/// Growth exponent check against the a priori bounds near r = 0.
AprioriReport apriori_check(const std::vector<double>& r, const std::vector<double>& u,
                            const std::vector<double>& du, const ProblemParams& prm,
                            double tol = 1e-3);

}  // namespace radlab
