#include "radlab/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>
#include <memory>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "radlab/equilibria.hpp"
#include "radlab/errors.hpp"

namespace radlab {

namespace {

constexpr double kLn10 = 2.302585092994046;

// Least squares y ~ B c; returns c.
Eigen::VectorXd lsq(const Eigen::MatrixXd& B, const Eigen::VectorXd& y) {
    return B.colPivHouseholderQr().solve(y);
}

}  // namespace

Samples samples_from_profile(const Profile& prof, const std::vector<double>& r_grid) {
    Samples s;
    for (double r : r_grid) {
        const double u = prof.eval(r).first;
        if (u > 0.0) {
            s.log_r.push_back(std::log(r));
            s.log_u.push_back(std::log(u));
        }
    }
    return s;
}

Samples samples_from_trajectory(const Trajectory& traj) {
    const ProblemParams& prm = traj.params;
    const double a = chart_exponent(traj.chart, prm);
    Samples s;
    std::vector<std::size_t> idx(traj.t.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return traj.t[x] < traj.t[y]; });
    for (auto i : idx) {
        // u = r^{-a} X with X the scaled amplitude of the chart
        double X = traj.states[i][0];
        if (traj.chart == Chart::order3_desing) X = std::pow(std::abs(X), 1.0 / (prm.p - prm.q));
        if (!(X > 0.0) || !std::isfinite(X)) continue;
        s.log_r.push_back(traj.t[i]);
        s.log_u.push_back(-a * traj.t[i] + std::log(X));
    }
    return s;
}

FitResult fit_law(const Samples& s, LawEnd end, LawTemplate shape, double a, double b, const FitOptions& opts) {
    if (s.log_r.size() != s.log_u.size() || s.log_r.size() < 5) throw DomainError("fit needs at least 5 samples");
    double lr_min = std::numeric_limits<double>::infinity(), lr_max = -lr_min;
    for (double l : s.log_r) {
        lr_min = std::min(lr_min, l);
        lr_max = std::max(lr_max, l);
    }
    if (lr_max - lr_min < 2.0 * kLn10) throw DomainError("insufficient decade coverage (need 2 decades)");
    const bool at_zero = end == LawEnd::zero;
    const bool logvar = shape != LawTemplate::power;
    // window in the fit variable v: ln r (power) or |ln r| (log templates)
    double v_end = 0, v_far = 0;
    if (!logvar) {
        v_end = at_zero ? lr_min : lr_max;
        v_far = at_zero ? v_end + kLn10 : v_end - kLn10;
    } else {
        v_end = at_zero ? -lr_min : lr_max;
        if (!(v_end > 1.0)) throw DomainError("log-corrected fit needs data beyond |ln r| = 1 toward the end");
        v_far = v_end / 10.0;
    }
    const double span = std::abs(v_end - v_far);
    const double v_stop = v_end + (v_far > v_end ? 1.0 : -1.0) * opts.trim * span;
    const double w_lo = std::min(v_far, v_stop), w_hi = std::max(v_far, v_stop);

    std::vector<double> lr, lu, u;
    for (std::size_t i = 0; i < s.log_r.size(); ++i) {
        const double l = s.log_r[i];
        const double v = !logvar ? l : (at_zero ? -l : l);
        if (logvar && (at_zero ? l >= 0.0 : l <= 0.0)) continue;
        if (v < w_lo || v > w_hi || !std::isfinite(s.log_u[i])) continue;
        lr.push_back(l);
        lu.push_back(s.log_u[i]);
        u.push_back(std::exp(s.log_u[i]));
    }
    const std::size_t n = lr.size();
    if (n < 5) throw DomainError("fit window holds fewer than 5 samples");

    FitResult f;
    f.shape = shape;
    f.a = a;
    f.b = b;
    f.n_points = n;
    if (!logvar) {
        f.window_lo = std::exp(w_lo);
        f.window_hi = std::exp(w_hi);
    } else if (at_zero) {
        f.window_lo = std::exp(-w_hi);
        f.window_hi = std::exp(-w_lo);
    } else {
        f.window_lo = std::exp(w_lo);
        f.window_hi = std::exp(w_hi);
    }
    Eigen::VectorXd y(n);
    switch (shape) {
        case LawTemplate::power: {
            Eigen::MatrixXd B(n, 2);
            double acc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                B(i, 0) = 1.0;
                B(i, 1) = lr[i];
                y(i) = lu[i];
                acc += lu[i] + a * lr[i];
            }
            const Eigen::VectorXd c = lsq(B, y);
            f.slope_r = c(1);
            f.exponent_residual = std::abs(-c(1) - a);
            f.constant = std::exp(acc / double(n));
            break;
        }
        case LawTemplate::power_log:
        case LawTemplate::log_only: {
            Eigen::MatrixXd B(n, 3);
            double acc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ll = std::log(std::abs(lr[i]));
                B(i, 0) = 1.0;
                B(i, 1) = lr[i];
                B(i, 2) = ll;
                y(i) = lu[i];
                acc += lu[i] + a * lr[i] + b * ll;
            }
            const Eigen::VectorXd c = lsq(B, y);
            f.slope_r = c(1);
            f.slope_logr = c(2);
            // the ln|ln r| coefficient converges like 1/ln|ln r| and is tracked apart from the slope
            f.exponent_residual = std::abs(-c(1) - a);
            f.log_exponent_residual = std::abs(-c(2) - b);
            f.constant = std::exp(acc / double(n));
            break;
        }
        case LawTemplate::loglog: {
            Eigen::MatrixXd B(n, 2);
            double acc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double g = std::log(std::abs(lr[i]));
                if (!(g > 0.0)) throw DomainError("loglog fit needs |ln r| > 1 on the window");
                B(i, 0) = 1.0;
                B(i, 1) = g;
                y(i) = u[i];
                acc += u[i] / g;
            }
            const Eigen::VectorXd c = lsq(B, y);
            f.constant = acc / double(n);
            f.slope_logr = c(1);
            f.exponent_residual = std::abs(c(1) - f.constant) / std::abs(f.constant);
            break;
        }
    }
    return f;
}

FitResult fit_law(const Samples& s, const AsymptoticLaw& law, const FitOptions& opts) {
    return fit_law(s, law.end, law.shape, law.a, law.b, opts);
}

Classification classify_behavior(const Samples& s, LawEnd end, const ProblemParams& prm, const ClassifyOptions& opts) {
    const RegimeReport rep = classify_regime(prm);
    const auto& catalog = end == LawEnd::zero ? rep.laws_at_zero : rep.laws_at_infinity;
    Classification c;
    const LawFit* best = nullptr;
    for (const auto& law : catalog) {
        LawFit lf;
        lf.law = law;
        try {
            lf.fit = fit_law(s, law, opts.fit);
        } catch (const DomainError&) {
            c.candidates.push_back(lf);
            continue;
        }
        bool ok = lf.fit.exponent_residual <= opts.slope_tol &&
                  lf.fit.log_exponent_residual <= opts.log_exponent_tol && std::isfinite(lf.fit.constant) && lf.fit.constant > 0.0;
        if (law.constant) {
            lf.constant_error = std::abs(lf.fit.constant / *law.constant - 1.0);
            const double tol = law.shape == LawTemplate::power ? opts.constant_tol : opts.log_constant_tol;
            ok = ok && *lf.constant_error <= tol;
        }
        lf.matched = ok;
        c.candidates.push_back(lf);
    }
    for (const auto& lf : c.candidates) {
        if (!lf.matched) continue;
        if (!best || lf.fit.exponent_residual + lf.constant_error.value_or(0.0) <
                         best->fit.exponent_residual + best->constant_error.value_or(0.0))
            best = &lf;
    }
    if (best) {
        c.classified = true;
        c.law = best->law;
    }
    return c;
}

namespace {

// Eikonal chart in reversed time tau = -t, for the stiff solver.
struct EikonalBack {
    double gamma, theta, s, p, q, M;
    double w(double tau) const { return std::exp(s * tau); }  // e^{-s t}
};

int back_rhs(double tau, const double x[], double dx[], void* ctx) {
    const auto& f = *static_cast<const EikonalBack*>(ctx);
    const double X = std::abs(x[0]), Y = std::abs(x[1]);
    dx[0] = -(f.gamma * x[0] - x[1]);
    dx[1] = -(f.theta * x[1] + f.w(tau) * (f.M * std::pow(Y, f.q) - std::pow(X, f.p)));
    return GSL_SUCCESS;
}

int back_jac(double tau, const double x[], double* J, double dfdt[], void* ctx) {
    const auto& f = *static_cast<const EikonalBack*>(ctx);
    const double X = std::abs(x[0]), Y = std::abs(x[1]), w = f.w(tau);
    J[0] = -f.gamma;
    J[1] = 1.0;
    J[2] = w * f.p * std::pow(X, f.p - 1.0);
    J[3] = -(f.theta + w * f.q * f.M * std::pow(Y, f.q - 1.0));
    dfdt[0] = 0.0;
    dfdt[1] = -f.s * w * (f.M * std::pow(Y, f.q) - std::pow(X, f.p));
    return GSL_SUCCESS;
}

// Backward run from t_start to t_stop (t_stop < t_start) on a uniform t grid.
// Returns the escape direction when X leaves [X_M/2, 3X_M/2] (escape set), else 0.
int run_back(const EikonalBack& f, double X0, double Y0, double t_start, double t_stop, double dt, double X_M,
             bool escape, std::vector<double>& ts, std::vector<double>& Xs) {
    ts.assign(1, t_start);
    Xs.assign(1, X0);
    gsl_odeiv2_system sys{back_rhs, back_jac, 2, const_cast<EikonalBack*>(&f)};
    std::unique_ptr<gsl_odeiv2_driver, decltype(&gsl_odeiv2_driver_free)> drv(
        gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_msbdf, 1e-6, 1e-14, 1e-12), gsl_odeiv2_driver_free);
    double x[2] = {X0, Y0};
    double tau = -t_start;
    for (double target = -t_start + dt; tau < -t_stop; target += dt) {
        const double tt = std::min(target, -t_stop);
        if (gsl_odeiv2_driver_apply(drv.get(), &tau, tt, x) != GSL_SUCCESS) {
            // during shooting a failed step still reports the side of X_M it drifted to
            if (escape && x[0] != X_M) return x[0] > X_M ? 1 : -1;
            throw NumericalError(fmt::format("stiff eikonal integration failed at t = {} (X = {}, Y = {})", -tau, x[0], x[1]));
        }
        ts.push_back(-tau);
        Xs.push_back(x[0]);
        if (escape && std::abs(x[0] - X_M) > 0.5 * X_M) return x[0] > X_M ? 1 : -1;
    }
    return 0;
}

}  // namespace

ExpansionResult verify_expansion(const ProblemParams& prm) {
    check_basic(prm);
    if (!(prm.M > 0.0)) throw DomainError("expansion needs M > 0");
    if (!(prm.q < prm.p)) throw DomainError("expansion needs q < p");
    const ExponentSet e = compute_exponents(prm);
    const double theta = *e.theta, gamma = *e.gamma;
    if (compare(theta, 0.0) == Position::equal) throw DomainError("expansion needs theta != 0");
    if (compare(e.sigma, 0.0) == Position::equal) throw DomainError("expansion needs q != 2p/(p+1)");
    const double p = prm.p, q = prm.q, M = prm.M;
    const double X_M = *fixed_points(prm).X_M;
    const double s = e.sigma / (p - q);
    const EikonalBack f{gamma, theta, s, p, q, M};
    auto slow_Y = [&](double X) { return std::pow(std::pow(X, p) / M, 1.0 / q); };

    ExpansionResult res;
    res.predicted = theta * std::pow(gamma, 1.0 - q) * std::pow(X_M, 2.0 - q) / (p * (q - 1.0) * M);
    if (compare(q, 2.0) == Position::equal)
        res.predicted_q2 = (2.0 * (prm.N - 1.0) - (prm.N - 2.0) * p) / (2.0 * p * M);

    const double dt = 0.02;
    std::vector<double> wt, wd;  // window t and X - X_M
    // s > 0: the orbit converging as t -> -inf; bisect X(t1) so the backward run stays near X_M.
    // The run stops once e^{-st} reaches e^{30}, beyond which the fast mode defeats the solver.
    // s < 0: bisect X(t_far) so the backward run lands on X(t1) = X_M, which leaves only a
    // decaying e^{-t} contamination on the window.
    const double t1 = std::log(0.1) / s;
    const double t_start = s > 0.0 ? t1 : t1 + 28.0;
    const double t_stop = s > 0.0 ? std::max(t1 - 46.0, -30.0 / s) : t1;
    auto outcome = [&](double X0, std::vector<double>& T, std::vector<double>& XX) {
        const int esc = run_back(f, X0, slow_Y(X0), t_start, t_stop, dt, X_M, true, T, XX);
        if (esc != 0) return esc;
        return XX.back() > X_M ? 1 : -1;
    };
    const double width = s > 0.0 ? 0.4 : 0.1;
    double lo = (1.0 - width) * X_M, hi = (1.0 + width) * X_M;
    std::vector<double> tl, xl, th, xh;
    const int sl = outcome(lo, tl, xl), sh = outcome(hi, th, xh);
    if (sl == sh) throw NumericalError("expansion shooting bracket failed");
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * X_M; ++it) {
        const double mid = 0.5 * (lo + hi);
        std::vector<double> tm, xm;
        const int sm = outcome(mid, tm, xm);
        ++res.bisections;
        if (sm == sl) {
            lo = mid;
            tl.swap(tm);
            xl.swap(xm);
        } else {
            hi = mid;
            th.swap(tm);
            xh.swap(xm);
        }
    }
    const std::size_t m = std::min(tl.size(), th.size());
    for (std::size_t i = 0; i < m; ++i) {
        const double dlo = xl[i] - X_M, dhi = xh[i] - X_M;
        const double d = 0.5 * (dlo + dhi);
        const double ws = std::exp(s * tl[i]);
        if (ws > 0.1 || ws < 1e-7) continue;
        if (std::abs(dlo - dhi) > 1e-3 * std::abs(d)) break;
        if (std::abs(d) < 1e3 * std::numeric_limits<double>::epsilon() * X_M) break;
        wt.push_back(tl[i]);
        wd.push_back(d);
    }
    const std::size_t n = wt.size();
    if (n < 10) throw NumericalError("expansion fit window holds too few points");
    // e^{-t} coincides with e^{2st} when 2s = -1 and is then already covered
    const int cols = s > 0.0 || std::abs(2.0 * s + 1.0) < 0.05 ? 2 : 3;
    Eigen::MatrixXd B(n, cols);
    Eigen::VectorXd y(n);
    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ws = std::exp(s * wt[i]);
        // columns scaled by ws so the leading coefficient is fitted on O(1) data
        B(i, 0) = 1.0;
        B(i, 1) = ws;
        if (cols == 3) B(i, 2) = std::exp(-wt[i]) / ws;
        y(i) = wd[i] / ws;
        (wd[i] > 0.0 ? pos : neg)++;
    }
    const Eigen::VectorXd c = lsq(B, y);
    res.fitted = c(0);
    res.rel_error = std::abs(res.fitted / res.predicted - 1.0);
    res.sign = pos > 0 && neg == 0 ? 1 : (neg > 0 && pos == 0 ? -1 : 0);
    res.sign_matches = res.sign != 0 && (res.sign > 0) == (theta > 0);
    res.t_lo = *std::min_element(wt.begin(), wt.end());
    res.t_hi = *std::max_element(wt.begin(), wt.end());
    res.n_points = n;
    return res;
}

namespace {

Field hardy_field(double n) {
    return [n](const State& x, State& dx, double) {
        dx[0] = x[1];
        dx[1] = x[1] + std::copysign(std::pow(std::abs(x[0]), n), x[0]);
    };
}

}  // namespace

HardyResult hardy_limit(double n) {
    if (!(n > 1.0)) throw DomainError("hardy_limit needs n > 1");
    const double m = 1.0 / (n - 1.0);
    HardyResult h;
    h.n = n;
    h.predicted = std::pow(m, m);
    const double T = 1e6;
    const Field f = hardy_field(n);
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-20;
    io.detect_axis = false;
    io.blowup_threshold = 1e300;
    io.h0 = 1.0;
    const double th_T = std::pow((n - 1.0) * T, -m);
    const double dth_T = -std::pow((n - 1.0) * T, -m - 1.0);
    Trajectory back = integrate_field(f, {th_T, dth_T}, T, 0.0, io);
    if (back.event.kind != EventKind::reached_t_end)
        throw NumericalError("backward Hardy run ended early: " + back.event.detail);
    for (std::size_t i = back.t.size(); i-- > 0;) {
        h.t.push_back(back.t[i]);
        h.theta.push_back(back.states[i][0]);
        h.dtheta.push_back(back.states[i][1]);
    }
    h.theta0 = h.theta.front();
    h.dtheta0 = h.dtheta.front();

    // forward shot from theta(0): too steep blows up, too shallow crosses zero
    auto shot = [&](double d0) {
        IntegrateOptions fo;
        fo.rtol = 1e-12;
        fo.atol = 1e-20;
        fo.blowup_threshold = 1e3;
        Trajectory tr = integrate_field(f, {h.theta0, d0}, 0.0, 40.0, fo);
        if (tr.event.kind == EventKind::blow_up) return 1;
        if (tr.event.kind == EventKind::x_axis_crossing) return -1;
        const State& z = tr.states.back();
        return z[1] + std::pow(std::abs(z[0]), n) > 0.0 ? 1 : -1;
    };
    double lo = h.dtheta0 - 1.0, hi = h.dtheta0 + 1.0;
    if (shot(lo) != -1 || shot(hi) != 1) throw NumericalError("Hardy shooting bracket failed");
    for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (shot(mid) > 0 ? hi : lo) = mid;
    }
    h.shot_dtheta0 = 0.5 * (lo + hi);
    h.shoot_mismatch = std::abs(h.shot_dtheta0 - h.dtheta0);

    // fit t^m theta = L + B ln t / t + C / t on [1e2, 1e4]
    std::vector<double> wt, wy;
    h.shift_lo = std::numeric_limits<double>::infinity();
    h.shift_hi = -h.shift_lo;
    for (std::size_t i = 0; i < h.t.size(); ++i) {
        const double t = h.t[i];
        if (t < 1e2 || t > 1e4) continue;
        wt.push_back(t);
        wy.push_back(std::pow(t, m) * h.theta[i]);
        const double shift = std::pow(h.theta[i], -(n - 1.0)) / (n - 1.0) - t;
        h.shift_lo = std::min(h.shift_lo, shift);
        h.shift_hi = std::max(h.shift_hi, shift);
    }
    if (wt.size() < 10) throw NumericalError("Hardy fit window holds too few points");
    Eigen::MatrixXd B(wt.size(), 3);
    Eigen::VectorXd y(wt.size());
    for (std::size_t i = 0; i < wt.size(); ++i) {
        B(i, 0) = 1.0;
        B(i, 1) = std::log(wt[i]) / wt[i];
        B(i, 2) = 1.0 / wt[i];
        y(i) = wy[i];
    }
    h.limit = lsq(B, y)(0);

    const auto ts = h.t;
    const auto th = h.theta;
    const auto dth = h.dtheta;
    h.eval = [f, ts, th, dth](double t) {
        if (t < ts.front() || t > ts.back()) throw DomainError("t outside the Hardy solution range");
        auto it = std::lower_bound(ts.begin(), ts.end(), t);
        std::size_t k = std::size_t(it - ts.begin());
        if (k == ts.size()) k = ts.size() - 1;
        if (ts[k] == t) return std::make_pair(th[k], dth[k]);
        // re-integrate backward from the stored point at or after t
        IntegrateOptions o;
        o.rtol = 1e-13;
        o.atol = 1e-22;
        o.detect_axis = false;
        o.blowup_threshold = 1e300;
        o.h0 = std::min(1e-3, std::abs(ts[k] - t));
        Trajectory tr = integrate_field(f, {th[k], dth[k]}, ts[k], t, o);
        return std::make_pair(tr.states.back()[0], tr.states.back()[1]);
    };
    return h;
}

double hardy_residual(const HardyResult& h, double t, double rel_step) {
    const double dt = t * rel_step;
    const auto [th, d1] = h.eval(t);
    const double d2 = (-h.eval(t + 2 * dt).second + 8 * h.eval(t + dt).second - 8 * h.eval(t - dt).second +
                       h.eval(t - 2 * dt).second) /
                      (12 * dt);
    const double thn = std::pow(th, h.n);
    const double norm = std::max({std::abs(d2), std::abs(d1), thn});
    return (d2 - d1 - thn) / norm;
}

}  // namespace radlab
