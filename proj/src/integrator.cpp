#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

#include "radlab/charts.hpp"
#include "radlab/errors.hpp"

namespace radlab {

namespace odeint = boost::numeric::odeint;

namespace {

struct StopCondition {
    std::function<double(double, const State&)> g;
    EventKind kind;
    std::string detail;
};

double sup_norm(const State& s) {
    double n = 0.0;
    for (double v : s) n = std::max(n, std::abs(v));
    return n;
}

bool finite_state(const State& s) {
    for (double v : s)
        if (!std::isfinite(v)) return false;
    return true;
}

double dist(const State& a, const State& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(d);
}

// Bisection of a sign change of h on [ta, tb] using dense output.
template <class Stepper, class H>
double refine(Stepper& st, double ta, double tb, H h, double tol, State& at) {
    const double ha = h(ta);
    for (int it = 0; it < 200 && std::abs(tb - ta) > tol; ++it) {
        const double tm = 0.5 * (ta + tb);
        const double hm = h(tm);
        if ((hm > 0) == (ha > 0) && hm != 0.0)
            ta = tm;
        else
            tb = tm;
    }
    st.calc_state(tb, at);
    return tb;
}

Trajectory run(const Field& f, const State& y0, double t0, double t1, const IntegrateOptions& opts,
               const std::vector<StopCondition>& stops) {
    Trajectory tr;
    tr.t.push_back(t0);
    tr.states.push_back(y0);
    if (!finite_state(y0)) throw DomainError("initial state is not finite");
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    if (t1 == t0) {
        tr.event = {EventKind::reached_t_end, t0, y0, std::nullopt, ""};
        return tr;
    }
    if (dir < 0 && opts.max_step > 0) {
        // odeint's step limiter drops the sign of a capped step; run the reversed field forward
        const Field rev = [&f](const State& x, State& dxdt, double s) {
            f(x, dxdt, -s);
            for (double& v : dxdt) v = -v;
        };
        std::vector<StopCondition> rstops;
        for (const auto& c : stops)
            rstops.push_back({[g = c.g](double s, const State& x) { return g(-s, x); }, c.kind, c.detail});
        Trajectory r = run(rev, y0, -t0, -t1, opts, rstops);
        for (double& t : r.t) t = -t;
        r.event.t = -r.event.t;
        return r;
    }
    auto sys = [&f](const State& x, State& dxdt, double t) { f(x, dxdt, t); };
    auto st = odeint::make_dense_output(opts.atol, opts.rtol, opts.max_step, odeint::runge_kutta_dopri5<State>());
    double h0 = opts.h0;
    if (std::isfinite(t1)) h0 = std::min(h0, std::abs(t1 - t0));
    st.initialize(y0, t0, dir * h0);

    std::vector<double> g_prev;
    for (const auto& s : stops) g_prev.push_back(s.g(t0, y0));
    int grow_count = 0;
    double prev_norm = sup_norm(y0);
    double prev_g = std::numeric_limits<double>::quiet_NaN(), prev_gt = 0.0;
    std::vector<double> enter(opts.equilibria.size(), std::numeric_limits<double>::quiet_NaN());
    const bool axis = opts.detect_axis && y0[0] > 0.0;

    auto finish = [&](EventKind k, double t, const State& s, std::string detail) {
        if (tr.t.back() != t) {
            tr.t.push_back(t);
            tr.states.push_back(s);
        }
        tr.event = {k, t, s, std::nullopt, std::move(detail)};
        return tr;
    };

    for (long step = 0; step < opts.max_steps; ++step) {
        std::pair<double, double> iv;
        try {
            iv = st.do_step(sys);
        } catch (const std::exception& ex) {
            tr.event = {EventKind::integration_failure, tr.t.back(), tr.states.back(), std::nullopt,
                        std::string("step failure: ") + ex.what()};
            return tr;
        }
        const double ta = iv.first, tb = iv.second;
        const State yb = st.current_state();
        if (!finite_state(yb)) {
            tr.event = {EventKind::integration_failure, tr.t.back(), tr.states.back(), std::nullopt,
                        "non-finite state"};
            return tr;
        }
        if (std::abs(tb - ta) < 1e-300) {
            tr.event = {EventKind::integration_failure, tr.t.back(), tr.states.back(), std::nullopt,
                        "step size underflow"};
            return tr;
        }
        State at(yb.size());
        // earliest of the sign-change events inside this step
        double t_ev = std::numeric_limits<double>::quiet_NaN();
        EventKind k_ev = EventKind::left_domain;
        std::string d_ev;
        State s_ev;
        auto consider = [&](double te, const State& se, EventKind k, const std::string& d) {
            if (std::isnan(t_ev) || dir * (te - t_ev) < 0) {
                t_ev = te;
                s_ev = se;
                k_ev = k;
                d_ev = d;
            }
        };
        if (axis && yb[0] <= 0.0) {
            auto h = [&](double t) {
                State tmp(yb.size());
                st.calc_state(t, tmp);
                return tmp[0];
            };
            const double te = refine(st, ta, tb, h, opts.event_tol, at);
            consider(te, at, EventKind::x_axis_crossing, "first component reached 0");
        }
        for (std::size_t i = 0; i < stops.size(); ++i) {
            const double gb = stops[i].g(tb, yb);
            if (g_prev[i] != 0.0 && (gb > 0) != (g_prev[i] > 0)) {
                auto h = [&](double t) {
                    State tmp(yb.size());
                    st.calc_state(t, tmp);
                    return stops[i].g(t, tmp);
                };
                const double te = refine(st, ta, tb, h, opts.event_tol, at);
                consider(te, at, stops[i].kind, stops[i].detail);
            }
            g_prev[i] = gb;
        }
        if (std::isfinite(t1) && dir * (tb - t1) >= 0.0 && (std::isnan(t_ev) || dir * (t1 - t_ev) < 0)) {
            State s1(yb.size());
            st.calc_state(t1, s1);
            return finish(EventKind::reached_t_end, t1, s1, "");
        }
        if (!std::isnan(t_ev)) return finish(k_ev, t_ev, s_ev, d_ev);

        tr.t.push_back(tb);
        tr.states.push_back(yb);

        const double n = sup_norm(yb);
        if (n > opts.blowup_threshold && n > prev_norm) {
            ++grow_count;
        } else {
            grow_count = 0;
        }
        const double dn = (n - prev_norm) / (tb - ta);
        const double g = dn != 0.0 ? n / dn : std::numeric_limits<double>::quiet_NaN();
        if (grow_count >= opts.blowup_steps) {
            double tstar = tb;
            if (std::isfinite(prev_g) && std::isfinite(g) && tb != prev_gt) {
                const double slope = (g - prev_g) / (tb - prev_gt);
                if (slope != 0.0 && std::isfinite(slope)) tstar = tb - g / slope;
            }
            tr.event = {EventKind::blow_up, tstar, yb, std::nullopt,
                        "state norm exceeded the blow-up threshold"};
            return tr;
        }
        prev_g = g;
        prev_gt = tb;
        prev_norm = n;

        for (std::size_t k = 0; k < opts.equilibria.size(); ++k) {
            if (dist(yb, opts.equilibria[k]) < opts.conv_tol) {
                if (std::isnan(enter[k])) enter[k] = tb;
                if (std::abs(tb - enter[k]) >= opts.conv_window) {
                    tr.event = {EventKind::converged_to_equilibrium, tb, yb, opts.equilibria[k],
                                "distance below tolerance over the window"};
                    return tr;
                }
            } else {
                enter[k] = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    tr.event = {EventKind::integration_failure, tr.t.back(), tr.states.back(), std::nullopt,
                "step budget exhausted"};
    return tr;
}

}  // namespace

Trajectory integrate_field(const Field& f, const State& initial, double t0, double t1,
                           const IntegrateOptions& opts) {
    std::vector<StopCondition> stops;
    if (opts.stop_fn) stops.push_back({opts.stop_fn, EventKind::left_domain, opts.stop_detail});
    return run(f, initial, t0, t1, opts, stops);
}

Trajectory integrate(Chart c, const State& initial, double t0, double t1, const ProblemParams& prm,
                     const IntegrateOptions& opts) {
    const ChartInfo info = chart_info(c);
    if (static_cast<int>(initial.size()) != info.dimension)
        throw DomainError(std::string("initial state dimension does not match chart ") + info.name);
    chart_rhs(c, t0, initial, prm);  // validates the chart for these parameters
    std::vector<StopCondition> stops;
    if (opts.stop_fn) stops.push_back({opts.stop_fn, EventKind::left_domain, opts.stop_detail});
    const double rate = chart_time_rate(c, prm);
    if (rate != 0.0) {
        constexpr double cap = 700.0;
        if (std::abs(rate * t0) > cap) throw DomainError("t0 outside the representable range of the chart");
        stops.push_back({[rate](double t, const State&) { return cap - std::abs(rate * t); },
                         EventKind::left_domain, "exponential factor out of range"});
    }
    Field f = [c, &prm](const State& x, State& dxdt, double t) { dxdt = chart_rhs(c, t, x, prm); };
    Trajectory tr = run(f, initial, t0, t1, opts, stops);
    tr.chart = c;
    tr.params = prm;
    return tr;
}

}  // namespace radlab
