#include "radlab/charts.hpp"

#include <algorithm>
#include <cmath>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

double spow(double x, double e) { return std::copysign(std::pow(std::abs(x), e), x); }
double apow(double x, double e) { return std::pow(std::abs(x), e); }

double need_gamma(const ProblemParams& prm) {
    const ExponentSet e = compute_exponents(prm);
    if (!e.gamma) throw DomainError("chart needs q != p");
    return *e.gamma;
}

}  // namespace

ChartInfo chart_info(Chart c) {
    switch (c) {
        case Chart::planar: return {c, "planar", 2, true};
        case Chart::emden: return {c, "emden", 2, false};
        case Chart::riccati: return {c, "riccati", 2, false};
        case Chart::eikonal: return {c, "eikonal", 2, false};
        case Chart::order3: return {c, "order3", 3, true};
        case Chart::order3_desing: return {c, "order3_desing", 3, true};
    }
    return {c, "?", 0, true};
}

const char* to_string(Chart c) {
    switch (c) {
        case Chart::planar: return "planar";
        case Chart::emden: return "emden";
        case Chart::riccati: return "riccati";
        case Chart::eikonal: return "eikonal";
        case Chart::order3: return "order3";
        case Chart::order3_desing: return "order3_desing";
    }
    return "?";
}

Chart chart_from_string(const std::string& s) {
    for (Chart c : {Chart::planar, Chart::emden, Chart::riccati, Chart::eikonal, Chart::order3,
                    Chart::order3_desing})
        if (s == to_string(c)) return c;
    throw DomainError("unknown chart: " + s);
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::reached_t_end: return "reached_t_end";
        case EventKind::converged_to_equilibrium: return "converged_to_equilibrium";
        case EventKind::blow_up: return "blow_up";
        case EventKind::x_axis_crossing: return "x_axis_crossing";
        case EventKind::left_domain: return "left_domain";
        case EventKind::integration_failure: return "integration_failure";
    }
    return "?";
}

double chart_exponent(Chart c, const ProblemParams& prm) {
    const ExponentSet e = compute_exponents(prm);
    switch (c) {
        case Chart::planar:
        case Chart::emden: return e.alpha;
        case Chart::riccati: return e.beta;
        default: return need_gamma(prm);
    }
}

double chart_time_rate(Chart c, const ProblemParams& prm) {
    const ExponentSet e = compute_exponents(prm);
    switch (c) {
        case Chart::emden: return -e.sigma / (prm.p - 1.0);
        case Chart::riccati: return e.sigma / (prm.q - 1.0);
        case Chart::eikonal: need_gamma(prm); return -e.sigma / (prm.p - prm.q);
        default: return 0.0;
    }
}

State chart_rhs(Chart c, double t, const State& s, const ProblemParams& prm) {
    const ChartInfo info = chart_info(c);
    if (static_cast<int>(s.size()) != info.dimension)
        throw DomainError(std::string("state dimension does not match chart ") + info.name);
    const ExponentSet e = compute_exponents(prm);
    const double N = prm.N, p = prm.p, q = prm.q, M = prm.M;
    switch (c) {
        case Chart::planar:
            if (!is_scale_invariant(prm)) throw DomainError("planar chart needs q = 2p/(p+1)");
            return {e.alpha * s[0] - s[1], -e.K * s[1] - spow(s[0], p) + M * apow(s[1], q)};
        case Chart::emden: {
            const double f = std::exp(chart_time_rate(c, prm) * t);
            return {e.alpha * s[0] - s[1], -e.K * s[1] - spow(s[0], p) + M * f * apow(s[1], q)};
        }
        case Chart::riccati: {
            const double f = std::exp(chart_time_rate(c, prm) * t);
            return {e.beta * s[0] - s[1], -e.kappa * s[1] - f * spow(s[0], p) + M * apow(s[1], q)};
        }
        case Chart::eikonal: {
            const double g = need_gamma(prm);
            const double f = std::exp(chart_time_rate(c, prm) * t);
            return {g * s[0] - s[1], *e.theta * s[1] + f * (M * apow(s[1], q) - spow(s[0], p))};
        }
        case Chart::order3: {
            const double g = need_gamma(prm);
            const double X = s[0], xi = s[1], S = s[2];
            return {X * (g - S), xi * (e.beta - S),
                    S * (S + 2.0 - N) + apow(xi, q - 1.0) * (M * apow(S, q) - apow(X, p - q))};
        }
        case Chart::order3_desing: {
            const double g = need_gamma(prm);
            const double Xh = s[0], xh = s[1], S = s[2];
            return {(p - q) * Xh * (g - S), (q - 1.0) * xh * (e.beta - S),
                    S * (S + 2.0 - N) + xh * (M * apow(S, q) - Xh)};
        }
    }
    return {};
}

namespace {

// (a, X, Y) with u = r^{-a} X and u' = -r^{-a-1} Y
struct Scaled {
    double a, X, Y;
};

Scaled to_scaled(Chart c, const State& s, const ProblemParams& prm) {
    const double a = chart_exponent(c, prm);
    switch (c) {
        case Chart::order3: return {a, s[0], s[2] * s[0]};
        case Chart::order3_desing: {
            const double X = apow(s[0], 1.0 / (prm.p - prm.q));
            return {a, X, s[2] * X};
        }
        default: return {a, s[0], s[1]};
    }
}

}  // namespace

RadialPoint reconstruct(Chart c, double t, const State& s, const ProblemParams& prm) {
    const Scaled sc = to_scaled(c, s, prm);
    RadialPoint rp;
    rp.r = std::exp(t);
    rp.u = std::exp(-sc.a * t) * sc.X;
    rp.du = -std::exp(-(sc.a + 1.0) * t) * sc.Y;
    return rp;
}

State transfer_state(Chart from, Chart to, double t, const State& s, const ProblemParams& prm) {
    if (to == Chart::planar && !is_scale_invariant(prm))
        throw DomainError("planar chart needs q = 2p/(p+1)");
    const Scaled sc = to_scaled(from, s, prm);
    const double b = chart_exponent(to, prm);
    const double f = std::exp((b - sc.a) * t);
    const double X = f * sc.X, Y = f * sc.Y;
    if (to == Chart::order3 || to == Chart::order3_desing) {
        const double beta = compute_exponents(prm).beta;
        const double xi = std::exp((beta - b) * t) * X;
        const double S = Y / X;
        if (to == Chart::order3) return {X, xi, S};
        return {apow(X, prm.p - prm.q), apow(xi, prm.q - 1.0), S};
    }
    return {X, Y};
}

Trajectory chart_transfer(const Trajectory& traj, Chart target) {
    chart_exponent(target, traj.params);  // throws when undefined
    Trajectory out;
    out.chart = target;
    out.params = traj.params;
    out.t = traj.t;
    out.states.reserve(traj.states.size());
    for (std::size_t i = 0; i < traj.t.size(); ++i)
        out.states.push_back(transfer_state(traj.chart, target, traj.t[i], traj.states[i], traj.params));
    out.event = traj.event;
    if (!traj.event.state.empty())
        out.event.state = transfer_state(traj.chart, target, traj.event.t, traj.event.state, traj.params);
    if (traj.event.point)
        out.event.point = transfer_state(traj.chart, target, traj.event.t, *traj.event.point, traj.params);
    return out;
}

Diagnostics diagnostics(const Trajectory& traj) {
    const ProblemParams& prm = traj.params;
    const ExponentSet e = compute_exponents(prm);
    Diagnostics d;
    std::vector<std::size_t> idx(traj.t.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return traj.t[a] < traj.t[b]; });
    for (auto i : idx) {
        d.t.push_back(traj.t[i]);
        const State& s = traj.states[i];
        if (traj.chart == Chart::order3 || traj.chart == Chart::order3_desing)
            d.S.push_back(s[2]);
        else if (s[0] != 0.0)
            d.S.push_back(s[1] / s[0]);
        else
            d.S.push_back(std::nullopt);
    }
    if (!e.gamma) return d;

    const double p = prm.p, q = prm.q, M = prm.M, g = *e.gamma, th = *e.theta;
    const double c = e.sigma / (p - q);
    double B = 0.0;
    std::vector<double> ect;
    for (auto i : idx) {
        const State s = transfer_state(traj.chart, Chart::eikonal, traj.t[i], traj.states[i], prm);
        const double X = s[0], Y = s[1], Z = g * X - Y, t = traj.t[i];
        const double w = std::exp(c * t);
        d.E.push_back(apow(X, p + 1.0) / (p + 1.0) - M * std::pow(g, q) * apow(X, q + 1.0) / (q + 1.0) -
                      w * (Z * Z / 2.0 + g * th * X * X / 2.0));
        const double Q = (c / 2.0 + g + th) * Z * Z + c * g * th * X * X / 2.0;
        B = std::max(B, -Q);
        ect.push_back(w);
    }
    d.C2 = c != 0.0 ? B / c : 0.0;
    double scale = 1.0;
    for (double v : d.E) scale = std::max(scale, std::abs(v));
    d.worst_increase = 0.0;
    for (std::size_t k = 1; k < d.E.size(); ++k) {
        const double f0 = d.E[k - 1] - d.C2 * ect[k - 1];
        const double f1 = d.E[k] - d.C2 * ect[k];
        d.worst_increase = std::max(d.worst_increase, f1 - f0);
    }
    d.monotone = d.worst_increase <= 1e-8 * scale;
    return d;
}

AprioriReport apriori_check(const std::vector<double>& r, const std::vector<double>& u,
                            const std::vector<double>& du, const ProblemParams& prm, double tol) {
    const ExponentSet e = compute_exponents(prm);
    if (!e.gamma || !(prm.q < prm.p) || !(prm.M > 0.0))
        throw DomainError("a priori bounds need M > 0 and 1 < q < p");
    AprioriReport rep;
    rep.bound_u = std::max(*e.gamma, e.alpha);
    rep.bound_du = rep.bound_u + 1.0;
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] < r[i0]) i0 = i;
    const double lr0 = std::log(r[i0]);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] > 1.0 || i == i0) continue;
        const double dl = std::log(r[i]) - lr0;
        if (dl < 1e-9) continue;
        const double su = (std::log(u[i0]) - std::log(u[i])) / dl;
        rep.max_u_slope = std::max(rep.max_u_slope, su);
        if (!du.empty() && du[i] != 0.0 && du[i0] != 0.0) {
            const double sd = (std::log(std::abs(du[i0])) - std::log(std::abs(du[i]))) / dl;
            rep.max_du_slope = std::max(rep.max_du_slope, sd);
            if (sd > rep.bound_du + tol && !rep.violating_r) rep.violating_r = r[i];
        }
        if (su > rep.bound_u + tol && !rep.violating_r) rep.violating_r = r[i];
    }
    rep.pass = !rep.violating_r.has_value();
    return rep;
}

}  // namespace radlab
