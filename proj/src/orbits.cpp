#include "radlab/orbits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

double norm2(const State& s) {
    double n = 0.0;
    for (double v : s) n += v * v;
    return std::sqrt(n);
}

double dist(const State& a, const State& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(d);
}

State shifted(const State& s, const State& origin, double sign = -1.0) {
    State out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + sign * origin[i];
    return out;
}

}  // namespace

RadialProfile regular_solution(double a, const ProblemParams& prm, double r_max,
                               const IntegrateOptions& opts) {
    check_basic(prm);
    if (!(a > 0.0)) throw DomainError("regular solution needs u(0) > 0");
    if (prm.M < 0.0) throw DomainError("regular solution needs M >= 0");
    if (!(prm.q < prm.p)) throw DomainError("regular solution needs q < p");
    const double N = prm.N, p = prm.p, q = prm.q, M = prm.M;
    const double r0 = 1e-4 * std::pow(a, -(p - 1.0) / 2.0);
    const double ap = std::pow(a, p);
    const State y0 = {a + ap * r0 * r0 / (2.0 * N), ap * r0 / N};
    Field f = [&](const State& s, State& d, double r) {
        d.resize(2);
        d[0] = s[1];
        d[1] = -(N - 1.0) / r * s[1] + std::pow(std::abs(s[0]), p) - M * std::pow(std::abs(s[1]), q);
    };
    IntegrateOptions o = opts;
    o.h0 = std::min(o.h0, r0);
    Trajectory tr = integrate_field(f, y0, r0, r_max, o);
    RadialProfile out;
    out.r.push_back(0.0);
    out.u.push_back(a);
    out.du.push_back(0.0);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        out.r.push_back(tr.t[i]);
        out.u.push_back(tr.states[i][0]);
        out.du.push_back(tr.states[i][1]);
    }
    out.event = tr.event;
    if (tr.event.kind == EventKind::blow_up) {
        // u ~ C (R - r)^{-alpha}: linear extrapolation of u^{-1/alpha}
        const double alpha = 2.0 / (p - 1.0);
        const State& s = tr.states.back();
        out.blowup_radius = tr.t.back() + alpha * s[0] / s[1];
    }
    if (tr.event.kind == EventKind::integration_failure)
        throw NumericalError("regular solution integration failed: " + tr.event.detail);
    return out;
}

State manifold_seed(const EquilibriumReport& eq, std::size_t eig_index, double epsilon, int side) {
    if (eig_index >= eq.eigenvalues.size()) throw DomainError("eigen index out of range");
    const auto lam = eq.eigenvalues[eig_index];
    const double scale = std::max(1.0, norm2(eq.location));
    if (std::abs(lam) <= 1e-10 * scale || eq.eigenvectors[eig_index].empty())
        throw DomainError("manifold seed needs a real nonzero eigenvalue");
    if (epsilon < 0.0) throw DomainError("epsilon must be non-negative");
    const std::vector<double>& v = eq.eigenvectors[eig_index];
    const double nv = norm2(v);
    State s = eq.location;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += (side >= 0 ? 1.0 : -1.0) * epsilon * v[i] / nv;
    return s;
}

namespace {

struct ShootContext {
    const ProblemParams& prm;
    State source;
    State target;
    std::vector<State> equilibria;  // shifted by source
    IntegrateOptions opts;
};

Field shifted_field(const ProblemParams& prm, const State& origin) {
    return [&prm, origin](const State& z, State& d, double t) {
        d = chart_rhs(Chart::planar, t, shifted(z, origin, 1.0), prm);
    };
}

Trajectory run_shifted(const ShootContext& c, const State& z0, double t1) {
    IntegrateOptions o = c.opts;
    o.equilibria = c.equilibria;
    o.detect_axis = false;
    // the axis x = 0 in shifted coordinates
    const double xs = c.source[0];
    if (z0[0] + xs > 0.0)
        o.stop_fn = [xs](double, const State& z) { return z[0] + xs; };
    o.stop_detail = "first component reached 0";
    Trajectory tr = integrate_field(shifted_field(c.prm, c.source), z0, 0.0, t1, o);
    tr.chart = Chart::planar;
    tr.params = c.prm;
    for (auto& s : tr.states) s = shifted(s, c.source, 1.0);
    tr.event.state = shifted(tr.event.state, c.source, 1.0);
    if (tr.event.point) tr.event.point = shifted(*tr.event.point, c.source, 1.0);
    if (tr.event.kind == EventKind::left_domain) tr.event.kind = EventKind::x_axis_crossing;
    return tr;
}

double closest(const Trajectory& tr, const State& target) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : tr.states) best = std::min(best, dist(s, target));
    return best;
}

std::string outcome_label(const Trajectory& tr, const ProblemParams& prm, const State& target) {
    const Event& ev = tr.event;
    std::string lab = to_string(ev.kind);
    if (ev.kind == EventKind::converged_to_equilibrium && ev.point) {
        lab += dist(*ev.point, target) < 1e-12 ? ":target" : ":other";
        return lab;
    }
    const State& s = tr.states.back();
    const double alpha = compute_exponents(prm).alpha;
    lab += s[1] > alpha * s[0] ? ":aboveL" : ":belowL";
    lab += s[1] > 0 ? ":Q1" : ":Q4";
    return lab;
}

double wrap_angle(double a) {
    const double tp = 2.0 * std::numbers::pi;
    a = std::fmod(a, tp);
    if (a > std::numbers::pi) a -= tp;
    if (a < -std::numbers::pi) a += tp;
    return a;
}

}  // namespace

ShootResult shoot_connection(const EquilibriumReport& source, const EquilibriumReport& target,
                             const ProblemParams& prm, const ShootOptions& opts) {
    const auto clock0 = std::chrono::steady_clock::now();
    if (!is_scale_invariant(prm)) throw DomainError("shooting works in the planar chart (q = 2p/(p+1))");
    if (source.location.size() != 2 || target.location.size() != 2)
        throw DomainError("planar equilibria expected");
    ShootResult res;
    res.source = source;
    res.target = target;

    ShootContext ctx{prm, source.location, target.location, {}, opts.integ};
    ctx.opts.rtol = std::min(ctx.opts.rtol, 1e-11);
    ctx.opts.atol = 1e-16;
    std::vector<State> eqs = {{0.0, 0.0}};
    const double alpha = compute_exponents(prm).alpha;
    for (const auto& rt : find_constant_solutions(prm).roots) eqs.push_back({rt.x, alpha * rt.x});
    for (const auto& e : eqs) ctx.equilibria.push_back(shifted(e, ctx.source));
    const double tscale = std::max(1.0, norm2(ctx.target));
    const double tol = opts.tol_connect * tscale;

    bool node_source = true;
    for (const auto& l : source.eigenvalues)
        if (!(l.real() > 0.0)) node_source = false;

    double best_closest = std::numeric_limits<double>::infinity();
    if (node_source) {
        const double eps = opts.seed_radius > 0 ? opts.seed_radius : 1e-5 * std::max(1.0, norm2(ctx.source));
        const bool on_axis = ctx.source[0] == 0.0;
        const double lo_a = on_axis ? -std::numbers::pi / 2 : -std::numbers::pi;
        const double span = on_axis ? std::numbers::pi : 2.0 * std::numbers::pi;
        const int n = std::max(4, opts.n_angles);
        auto angle_at = [&](int i) {
            return on_axis ? lo_a + span * (i + 0.5) / n : lo_a + span * i / n;
        };
        auto fire = [&](double phi) {
            return run_shifted(ctx, {eps * std::cos(phi), eps * std::sin(phi)}, opts.t_max);
        };
        std::vector<std::string> labels(n);
        for (int i = 0; i < n; ++i) labels[i] = outcome_label(fire(angle_at(i)), prm, ctx.target);
        // boundaries between outcome classes, bisected in angle
        std::vector<Connection> boundaries;
        std::vector<Trajectory> boundary_orbits;
        const int pairs = on_axis ? n - 1 : n;
        for (int i = 0; i < pairs; ++i) {
            const int j = (i + 1) % n;
            if (labels[i] == labels[j]) continue;
            double a = angle_at(i), b = angle_at(i) + span / n;
            const std::string la = labels[i];
            int it = 0;
            for (; it < opts.max_bisections && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b);
                if (outcome_label(fire(m), prm, ctx.target) == la)
                    a = m;
                else
                    b = m;
            }
            const double phi = 0.5 * (a + b);
            Trajectory tr = fire(phi);
            const double ca = closest(tr, ctx.target);
            best_closest = std::min(best_closest, ca);
            boundaries.push_back({wrap_angle(phi), ca, it});
            boundary_orbits.push_back(std::move(tr));
        }
        res.closest_approach = best_closest;

        // The forward shot cannot approach a saddle closely (its unstable rate
        // amplifies rounding), so the stable branch integrated backward decides.
        std::size_t ks = 0;
        bool found = false;
        for (std::size_t k = 0; k < target.eigenvalues.size(); ++k)
            if (target.eigenvalues[k].real() < 0 && !target.eigenvectors[k].empty()) {
                ks = k;
                found = true;
            }
        res.terminal_distance = best_closest;
        if (found) {
            for (int side : {1, -1}) {
                const State seed = manifold_seed(target, ks, opts.back_seed * tscale, side);
                Trajectory back = run_shifted(ctx, shifted(seed, ctx.source), -opts.t_max);
                if (back.event.kind != EventKind::converged_to_equilibrium || !back.event.point ||
                    dist(*back.event.point, ctx.source) > 1e-12)
                    continue;
                const double gap = std::max(opts.back_seed * tscale, dist(back.states.back(), ctx.source));
                // arrival angle on the seed circle
                IntegrateOptions o = ctx.opts;
                o.stop_fn = [eps](double, const State& z) { return norm2(z) - eps; };
                o.detect_axis = false;
                Trajectory hit = integrate_field(shifted_field(prm, ctx.source), shifted(seed, ctx.source), 0.0,
                                                 -opts.t_max, o);
                if (hit.event.kind != EventKind::left_domain) continue;
                const double ang = std::atan2(hit.event.state[1], hit.event.state[0]);
                double mism = std::numeric_limits<double>::infinity();
                std::size_t jb = 0;
                for (std::size_t k = 0; k < boundaries.size(); ++k) {
                    const double d = std::abs(wrap_angle(ang - boundaries[k].angle));
                    if (d < mism) {
                        mism = d;
                        jb = k;
                    }
                }
                if (!std::isfinite(mism)) continue;
                res.connections.push_back({boundaries[jb].angle, gap, boundaries[jb].bisection_iterations});
                if (!res.confirmation || gap < res.terminal_distance) {
                    res.terminal_distance = gap;
                    res.angle = boundaries[jb].angle;
                    res.angle_mismatch = mism;
                    res.bisection_iterations = boundaries[jb].bisection_iterations;
                    res.shot = boundary_orbits[jb];
                    Trajectory fwd = back;
                    std::reverse(fwd.t.begin(), fwd.t.end());
                    std::reverse(fwd.states.begin(), fwd.states.end());
                    const double t_end = fwd.t.back();
                    for (auto& t : fwd.t) t -= t_end;
                    res.trajectory = fwd;
                    res.confirmation = back;
                }
            }
        }
        if (!res.confirmation && !boundary_orbits.empty()) res.trajectory = boundary_orbits.front();
        res.success = res.confirmation.has_value() && res.terminal_distance <= tol && res.angle_mismatch &&
                      *res.angle_mismatch <= 1e-6;
    } else {
        // saddle or sink source: follow the unstable branches
        for (std::size_t k = 0; k < source.eigenvalues.size(); ++k) {
            if (!(source.eigenvalues[k].real() > 0.0) || source.eigenvectors[k].empty()) continue;
            for (int side : {1, -1}) {
                const double eps = 1e-8 * std::max(1.0, norm2(ctx.source));
                const State seed = manifold_seed(source, k, eps, side);
                Trajectory tr = run_shifted(ctx, shifted(seed, ctx.source), opts.t_max);
                const double ca = closest(tr, ctx.target);
                const bool conv = tr.event.kind == EventKind::converged_to_equilibrium && tr.event.point &&
                                  dist(*tr.event.point, ctx.target) < 1e-12;
                if (ca < best_closest || conv) {
                    best_closest = ca;
                    res.trajectory = tr;
                }
                if (conv) {
                    res.success = true;
                    res.connections.push_back({0.0, ca, 0});
                }
            }
        }
        res.closest_approach = best_closest;
        res.terminal_distance = best_closest;
        if (res.success) res.terminal_distance = std::max(1e-8, dist(res.trajectory.states.back(), ctx.target));
    }
    res.status = res.success ? "success" : "no_connection_found";
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
    return res;
}

CentralManifoldResult central_manifold_profile(const ProblemParams& prm, double t_min, double t_max) {
    check_basic(prm);
    const double N = prm.N;
    if (N <= 2.0 || compare(prm.p, N / (N - 2.0)) != Position::equal ||
        compare(prm.q, N / (N - 1.0)) != Position::equal || !(prm.M > 0.0))
        throw DomainError("central manifold profile needs p = N/(N-2), q = N/(N-1), M > 0");
    const auto roots = find_constant_solutions(prm);
    if (roots.roots.size() != 1) throw NumericalError("expected a single constant solution");
    const double alpha = compute_exponents(prm).alpha;
    const State P = {roots.roots[0].x, alpha * roots.roots[0].x};
    const EquilibriumReport eq = linearize_planar(P, prm);
    std::size_t ks = 0;
    for (std::size_t k = 0; k < eq.eigenvalues.size(); ++k)
        if (eq.eigenvalues[k].real() < 0) ks = k;

    IntegrateOptions o;
    o.rtol = 1e-11;
    o.atol = 1e-22;
    o.detect_axis = true;
    const double delta = 1e-8;
    Trajectory best;
    double best_norm = std::numeric_limits<double>::infinity();
    State best_seed;
    for (int side : {1, -1}) {
        const State seed = manifold_seed(eq, ks, delta, side);
        Trajectory back = integrate(Chart::planar, seed, 0.0, t_min, prm, o);
        if (back.event.kind != EventKind::reached_t_end) continue;
        const double n = norm2(back.states.back());
        if (n < best_norm) {
            best_norm = n;
            best = back;
            best_seed = seed;
        }
    }
    if (best.t.empty()) throw NumericalError("no branch of the stable manifold reached t_min");
    o.max_step = 0.02;  // the forward part sits at P_M; keep it sampled for tail fits
    Trajectory fwd = integrate(Chart::planar, best_seed, 0.0, t_max, prm, o);
    CentralManifoldResult out;
    out.trajectory.chart = Chart::planar;
    out.trajectory.params = prm;
    for (std::size_t i = best.t.size(); i-- > 0;) {
        out.trajectory.t.push_back(best.t[i]);
        out.trajectory.states.push_back(best.states[i]);
    }
    for (std::size_t i = 1; i < fwd.t.size(); ++i) {
        out.trajectory.t.push_back(fwd.t[i]);
        out.trajectory.states.push_back(fwd.states[i]);
    }
    out.trajectory.event = fwd.event;
    out.t_min = out.trajectory.t.front();
    out.t_max = out.trajectory.t.back();
    return out;
}

EigenRateResult eigen_rate_check(const Trajectory& traj, const EquilibriumReport& eq, std::size_t eig_index,
                                 double window_radius) {
    const std::size_t n = eq.location.size();
    if (eig_index >= eq.eigenvalues.size() || eq.eigenvectors[eig_index].empty())
        throw DomainError("eigen index out of range or complex");
    const double mu = eq.eigenvalues[eig_index].real();
    Eigen::MatrixXd V(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eq.eigenvectors[k].empty()) throw DomainError("complex spectrum not supported");
        for (std::size_t i = 0; i < n; ++i) V(i, k) = eq.eigenvectors[k][i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
    if (!lu.isInvertible()) throw DomainError("eigenvectors are not a basis");
    const double scale = std::max(1.0, norm2(eq.location));
    std::vector<std::pair<double, double>> win;  // (distance, rescaled component)
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double d = dist(traj.states[i], eq.location);
        if (d > window_radius * scale || d == 0.0) continue;
        Eigen::VectorXd z(n);
        for (std::size_t j = 0; j < n; ++j) z[j] = traj.states[i][j] - eq.location[j];
        const Eigen::VectorXd c = lu.solve(z);
        win.push_back({d, std::exp(-mu * traj.t[i]) * c[eig_index]});
    }
    if (win.size() < 5) throw NumericalError("eigen-rate window too short");
    std::sort(win.begin(), win.end());
    EigenRateResult r;
    r.window_points = win.size();
    r.ell = win.front().second;
    double dev = 0.0;
    for (const auto& w : win) dev = std::max(dev, std::abs(w.second - r.ell));
    r.residual = r.ell != 0.0 ? dev / std::abs(r.ell) : std::numeric_limits<double>::infinity();
    if (!(std::abs(r.ell) > 1e-8 * scale)) throw NumericalError("eigen-rate limit vanishes");
    return r;
}

}  // namespace radlab
