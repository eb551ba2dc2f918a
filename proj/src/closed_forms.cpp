#include "radlab/closed_forms.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "radlab/equilibria.hpp"
#include "radlab/errors.hpp"

namespace radlab {

namespace {

double spow(double x, double e) { return std::copysign(std::pow(std::abs(x), e), x); }

bool near(double a, double b) { return std::abs(a - b) <= kThresholdTol * std::max(1.0, std::abs(b)); }

void need_positive_M(const ProblemParams& prm) {
    if (!(prm.M > 0.0)) throw DomainError("needs M > 0");
}

// Root of f on [a, b] where f changes sign.
template <class F>
double bracket_root(F f, double a, double b) {
    double fa = f(a), fb = f(b);
    for (int i = 0; i < 200 && (fa > 0) == (fb > 0); ++i) {
        b *= 2.0;
        fb = f(b);
    }
    if ((fa > 0) == (fb > 0)) throw NumericalError("no sign change for root bracket");
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(
        f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

Profile power_profile(double c, double a, double shift, const ProblemParams& prm, std::string label) {
    Profile pr;
    pr.eval = [c, a, shift](double r) {
        const double v = c * std::pow(r, -a);
        return std::make_pair(v + shift, -a * v / r);
    };
    pr.r_min = 0.0;
    pr.r_max = std::numeric_limits<double>::infinity();
    pr.label = std::move(label);
    pr.params = prm;
    return pr;
}

}  // namespace

const char* to_string(Operator o) {
    switch (o) {
        case Operator::full: return "full";
        case Operator::riccati: return "riccati";
        case Operator::eikonal: return "eikonal";
        case Operator::emden: return "emden";
    }
    return "?";
}

Profile selfsimilar(double x_root, const ProblemParams& prm) {
    check_basic(prm);
    if (!is_scale_invariant(prm)) throw DomainError("self-similar profiles need q = 2p/(p+1)");
    if (!(x_root > 0.0)) throw DomainError("x_root must be positive");
    const ExponentSet e = compute_exponents(prm);
    const double scale = std::max({1.0, std::abs(e.ell), std::pow(x_root, prm.p - 1.0)});
    if (std::abs(eval_pm(x_root, prm)) > 1e-9 * scale)
        throw DomainError(fmt::format("x = {} is not a constant solution (P_M = {:.3e})", x_root,
                                      eval_pm(x_root, prm)));
    return power_profile(x_root, e.alpha, 0.0, prm, "selfsimilar");
}

double eikonal_harmonic_constant(const ProblemParams& prm) {
    const double N = prm.N, p = prm.p, q = prm.q;
    return std::pow(prm.M * std::pow(N - 2.0, q), (N - 1.0) / p);
}

Profile eikonal_harmonic(const ProblemParams& prm) {
    check_basic(prm);
    need_positive_M(prm);
    const double N = prm.N;
    if (!(N > 2.0)) throw DomainError("eikonal harmonic profile needs N > 2");
    if (!near(prm.q, (N - 2.0) * prm.p / (N - 1.0)))
        throw DomainError("eikonal harmonic profile needs q = (N-2)p/(N-1)");
    return power_profile(eikonal_harmonic_constant(prm), N - 2.0, 0.0, prm, "eikonal_harmonic");
}

Profile critical_explicit(const ProblemParams& prm) {
    check_basic(prm);
    need_positive_M(prm);
    const double N = prm.N;
    if (!(N > 2.0) || !near(prm.p, N / (N - 2.0)) || !near(prm.q, N / (N - 1.0)))
        throw DomainError("critical explicit profile needs p = N/(N-2) and q = N/(N-1)");
    const double C = std::pow((N - 2.0) * std::pow(prm.M, (N - 1.0) / N), N - 2.0);
    return power_profile(C, N - 2.0, 0.0, prm, "critical_explicit");
}

namespace {

struct RiccatiLaw {
    double N, q, M, C, kappa, e;
    bool log_branch;
    double bracket(double r) const {
        if (log_branch) return C - (q - 1.0) * M * std::log(r);
        return C + (M / kappa) * std::pow(r, e);
    }
    double abs_du(double r) const { return std::pow(r, 1.0 - N) * std::pow(bracket(r), -1.0 / (q - 1.0)); }
    // sup of the interval where the bracket is positive (the bracket decreases in r)
    double r_c() const {
        if (log_branch) return std::exp(C / ((q - 1.0) * M));
        if (kappa > 0.0 && C >= 0.0) return std::numeric_limits<double>::infinity();
        if (!(C > 0.0) && kappa < 0.0) return 0.0;
        return std::pow(-C * kappa / M, 1.0 / e);
    }
};

RiccatiLaw riccati_law(double C, const ProblemParams& prm) {
    check_basic(prm);
    need_positive_M(prm);
    const ExponentSet ex = compute_exponents(prm);
    RiccatiLaw law{prm.N, prm.q, prm.M, C, ex.kappa, prm.N - (prm.N - 1.0) * prm.q,
                   compare(ex.kappa, 0.0) == Position::equal};
    return law;
}

}  // namespace

Profile riccati_profile(double C, const ProblemParams& prm, const RiccatiOptions& opts) {
    const RiccatiLaw law = riccati_law(C, prm);
    const double rc = law.r_c();
    if (!(rc > 0.0)) throw DomainError("the Riccati bracket is non-positive for every r > 0");
    const auto g = [law](double s) { return law.abs_du(s); };
    const bool tail_integrable =
        std::isinf(rc) && !law.log_branch && law.kappa > 0.0 &&
        ((C > 0.0 && law.N > 2.0) || (C == 0.0 && prm.q < 2.0));
    const double tol = opts.quad_tol;

    Profile pr;
    pr.params = prm;
    pr.op = Operator::riccati;
    pr.label = law.log_branch ? "riccati_log" : "riccati";
    pr.r_min = 0.0;
    if (tail_integrable) {
        pr.eval = [g, tol](double r) {
            boost::math::quadrature::exp_sinh<double> es;
            const double u = es.integrate(g, r, std::numeric_limits<double>::infinity(), tol);
            return std::make_pair(u, -g(r));
        };
        pr.r_max = rc;
        return pr;
    }
    double r_ref = opts.r_ref;
    if (!(r_ref > 0.0)) r_ref = std::isinf(rc) ? 1.0 : 0.5 * rc;
    if (!(r_ref < rc)) throw DomainError("anchor radius outside the Riccati interval");
    const double u_ref = opts.u_ref;
    // u(r) = u_ref + int_r^{r_ref} |u'| ds, integrated in ln s
    auto u_at = [g, r_ref, u_ref, tol](double r) {
        const auto h = [g](double x) {
            const double s = std::exp(x);
            return g(s) * s;
        };
        const double a = std::log(r), b = std::log(r_ref);
        if (a == b) return u_ref;
        double err = 0;
        const double I =
            boost::math::quadrature::gauss_kronrod<double, 31>::integrate(h, std::min(a, b), std::max(a, b), 20, tol, &err);
        return a < b ? u_ref + I : u_ref - I;
    };
    pr.eval = [u_at, g](double r) { return std::make_pair(u_at(r), -g(r)); };
    // restrict to u > 0 on the right of the anchor
    double hi = std::isinf(rc) ? r_ref * 1e12 : rc * (1.0 - 1e-9);
    if (u_at(hi) <= 0.0) hi = bracket_root([&](double r) { return u_at(r); }, r_ref, hi);
    pr.r_max = hi;
    return pr;
}

ExteriorProfile exterior_newton_profile(double C, const ProblemParams& prm) {
    check_basic(prm);
    const double N = prm.N, q = prm.q;
    if (!(N > 2.0)) throw DomainError("exterior Newton profile needs N >= 3");
    if (!(q > N / (N - 1.0))) throw DomainError("exterior Newton profile needs q > N/(N-1)");
    if (!(C > 0.0)) throw DomainError("exterior Newton profile needs C > 0");
    ExteriorProfile out;
    out.profile = riccati_profile(C, prm);
    out.profile.label = "exterior_newton";
    out.profile.op = Operator::riccati;
    out.predicted_limit = 1.0 / ((N - 2.0) * std::pow(C, 1.0 / (q - 1.0)));
    // r^{N-2} w = L + B r^{-mu} + ..., mu = (q-1) kappa
    const double mu = (q - 1.0) * compute_exponents(prm).kappa;
    const double r1 = 1e6, r2 = 1e8;
    const double y1 = std::pow(r1, N - 2.0) * out.profile.eval(r1).first;
    const double y2 = std::pow(r2, N - 2.0) * out.profile.eval(r2).first;
    const double w1 = std::pow(r1, -mu), w2 = std::pow(r2, -mu);
    out.fitted_limit = (y2 * w1 - y1 * w2) / (w1 - w2);
    if (!std::isfinite(out.fitted_limit)) throw NumericalError("non-integrable or unresolved tail");
    return out;
}

std::vector<double> log_grid(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b > a) || n < 2) throw DomainError("log grid needs 0 < a < b and n >= 2");
    std::vector<double> g(n);
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

double normalized_residual(const Profile& prof, double r, const OracleOptions& opts) {
    const double h = r * opts.rel_step;
    if (r - 2.0 * h < prof.r_min || r + 2.0 * h > prof.r_max)
        throw DomainError(fmt::format("r = {} outside the profile domain [{}, {}]", r, prof.r_min, prof.r_max));
    const ProblemParams& prm = prof.params;
    const auto [u, du] = prof.eval(r);
    const double d2 = (-prof.eval(r + 2.0 * h).second + 8.0 * prof.eval(r + h).second -
                       8.0 * prof.eval(r - h).second + prof.eval(r - 2.0 * h).second) /
                      (12.0 * h);
    const double lap = -d2 - (prm.N - 1.0) * du / r;
    const double absorb = spow(u, prm.p);
    const double grad = prm.M * std::pow(std::abs(du), prm.q);
    double res = 0, norm = 1.0;
    switch (prof.op) {
        case Operator::full:
            res = lap + absorb - grad;
            norm = std::max({1.0, std::abs(absorb), std::abs(grad)});
            break;
        case Operator::riccati:
            res = lap - grad;
            norm = std::max(1.0, std::abs(grad));
            break;
        case Operator::eikonal:
            res = absorb - grad;
            norm = std::max({1.0, std::abs(absorb), std::abs(grad)});
            break;
        case Operator::emden:
            res = lap + absorb;
            norm = std::max(1.0, std::abs(absorb));
            break;
    }
    return res / norm;
}

double residual_oracle(const Profile& prof, const std::vector<double>& r_grid, const OracleOptions& opts) {
    double worst = 0;
    for (double r : r_grid) worst = std::max(worst, std::abs(normalized_residual(prof, r, opts)));
    return worst;
}

void write_profile_csv(std::ostream& os, const Profile& prof, const std::vector<double>& r_grid) {
    os << "r,u,du,residual\n";
    for (double r : r_grid) {
        const auto [u, du] = prof.eval(r);
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", r, u, du, normalized_residual(prof, r));
    }
}

const char* to_string(BarrierFamily f) {
    switch (f) {
        case BarrierFamily::eikonal_sub: return "eikonal_sub";
        case BarrierFamily::eikonal_sub_truncated: return "eikonal_sub_truncated";
        case BarrierFamily::eikonal_super: return "eikonal_super";
        case BarrierFamily::riccati_sub: return "riccati_sub";
        case BarrierFamily::riccati_super: return "riccati_super";
        case BarrierFamily::emden_sub: return "emden_sub";
        case BarrierFamily::emden_super: return "emden_super";
        case BarrierFamily::weak_super: return "weak_super";
    }
    return "?";
}

BarrierFamily barrier_family_from_string(const std::string& s) {
    for (auto f : {BarrierFamily::eikonal_sub, BarrierFamily::eikonal_sub_truncated, BarrierFamily::eikonal_super,
                   BarrierFamily::riccati_sub, BarrierFamily::riccati_super, BarrierFamily::emden_sub,
                   BarrierFamily::emden_super, BarrierFamily::weak_super})
        if (s == to_string(f)) return f;
    throw DomainError("unknown barrier family: " + s);
}

bool is_subsolution_family(BarrierFamily f) {
    return f == BarrierFamily::eikonal_sub || f == BarrierFamily::eikonal_sub_truncated ||
           f == BarrierFamily::riccati_sub || f == BarrierFamily::emden_sub;
}

Certificate certify(const Profile& prof, bool subsolution, const CertifyOptions& opts) {
    Certificate cert;
    cert.claimed = subsolution ? "subsolution" : "supersolution";
    cert.r_lo = opts.r_lo;
    cert.r_hi = opts.r_hi;
    cert.n_points = opts.n_points;
    cert.slack = opts.slack;
    cert.worst = -std::numeric_limits<double>::infinity();
    for (double r : log_grid(opts.r_lo, opts.r_hi, opts.n_points)) {
        const double res = normalized_residual(prof, r, opts.oracle);
        const double viol = subsolution ? res : -res;
        if (viol > cert.worst) cert.worst = viol;
        if (viol > opts.slack && !cert.violating_r) cert.violating_r = r;
    }
    cert.certified = !cert.violating_r.has_value();
    return cert;
}

RiccatiWindow riccati_window(const ProblemParams& prm) {
    check_basic(prm);
    const ExponentSet e = compute_exponents(prm);
    const double s = (prm.q - 1.0) * e.kappa + e.beta;
    const double pr = (prm.q - 1.0) * e.kappa * e.beta;
    const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * pr));
    // stable quadratic roots of d^2 - s d + pr
    const double big = 0.5 * (s + std::copysign(disc, s));
    const double small = big != 0.0 ? pr / big : 0.0;
    RiccatiWindow w;
    w.mu1 = e.sigma / (prm.q - 1.0);
    // label the roots by proximity to beta and (q-1) kappa
    const double m3 = (prm.q - 1.0) * e.kappa;
    if (std::abs(big - e.beta) + std::abs(small - m3) <= std::abs(small - e.beta) + std::abs(big - m3)) {
        w.mu2 = big;
        w.mu3 = small;
    } else {
        w.mu2 = small;
        w.mu3 = big;
    }
    w.lo = std::max(0.0, std::min(w.mu2, w.mu3));
    w.hi = std::min(std::max(w.mu2, w.mu3), w.mu1);
    w.valid = disc > 0.0 && w.lo < w.hi;
    return w;
}

Sandwich sandwich_check(const Profile& sub, const Profile& super, const std::vector<double>& r_grid) {
    Sandwich s;
    s.min_gap = std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        const double gap = super.eval(r).first - sub.eval(r).first;
        s.min_gap = std::min(s.min_gap, gap);
        if (gap < 0.0 && !s.violating_r) s.violating_r = r;
    }
    s.ordered = !s.violating_r.has_value();
    return s;
}

namespace {

struct EikonalData {
    double p, q, gamma, theta, sigma, X_M;
    double Phi(double c) const { return std::pow(c, p - 1.0) - std::pow(c, q - 1.0) * std::pow(X_M, p - q); }
    double s() const { return sigma / (p - q); }
};

EikonalData eikonal_data(const ProblemParams& prm) {
    need_positive_M(prm);
    if (!(prm.q < prm.p)) throw DomainError("eikonal barriers need q < p");
    const ExponentSet e = compute_exponents(prm);
    const FixedPoints fp = fixed_points(prm);
    return {prm.p, prm.q, *e.gamma, *e.theta, e.sigma, *fp.X_M};
}

Profile truncated(double c, double a, double cut, const ProblemParams& prm, std::string label) {
    // c (r^{-a} - cut^{-a})_+
    Profile pr;
    pr.eval = [c, a, cut](double r) {
        if (r >= cut) return std::make_pair(0.0, 0.0);
        const double v = std::pow(r, -a);
        return std::make_pair(c * (v - std::pow(cut, -a)), -a * c * v / r);
    };
    pr.r_min = 0.0;
    pr.r_max = std::numeric_limits<double>::infinity();
    pr.label = std::move(label);
    pr.params = prm;
    return pr;
}

}  // namespace

Barrier barrier(BarrierFamily family, const BarrierParams& bp, const ProblemParams& prm, const CertifyOptions& opts) {
    check_basic(prm);
    Barrier b;
    b.family = family;
    CertifyOptions co = opts;
    const double N = prm.N, p = prm.p, q = prm.q, M = prm.M;
    const std::string name = to_string(family);
    switch (family) {
        case BarrierFamily::eikonal_sub: {
            const EikonalData d = eikonal_data(prm);
            if (compare(d.theta, 0.0) == Position::below) throw DomainError("eikonal_sub needs theta >= 0");
            const double c = bp.c.value_or(d.X_M);
            if (!(c > 0.0) || c > d.X_M * (1.0 + kThresholdTol)) throw DomainError("eikonal_sub needs 0 < c <= X_M");
            b.profile = power_profile(c, d.gamma, 0.0, prm, name);
            b.constants = {{"c", c}, {"X_M", d.X_M}, {"theta", d.theta}};
            break;
        }
        case BarrierFamily::eikonal_sub_truncated: {
            const EikonalData d = eikonal_data(prm);
            if (!(d.theta < 0.0) || !(d.sigma > 0.0))
                throw DomainError("eikonal_sub_truncated needs theta < 0 < sigma");
            const double cm = std::pow((q - 1.0) * std::pow(d.X_M, p - q) / (p - 1.0), 1.0 / (p - q));
            // bracket Phi(c_m) - gamma theta r^s is <= 0 exactly for r <= r1
            const double r1 = std::pow(d.Phi(cm) / (d.gamma * d.theta), 1.0 / d.s());
            b.profile = truncated(cm, d.gamma, r1, prm, name);
            b.constants = {{"c_m", cm}, {"r1", r1}, {"Phi_c_m", d.Phi(cm)}, {"X_M", d.X_M}};
            break;
        }
        case BarrierFamily::eikonal_super: {
            const EikonalData d = eikonal_data(prm);
            double c = 0, A = 0;
            if (!(d.theta > 0.0)) {
                c = bp.c.value_or(d.X_M);
                if (c < d.X_M * (1.0 - kThresholdTol)) throw DomainError("eikonal_super needs c >= X_M when theta <= 0");
                A = bp.A.value_or(0.0);
                if (A < 0.0) throw DomainError("eikonal_super needs A >= 0");
                b.constants = {{"c", c}, {"A", A}, {"X_M", d.X_M}};
            } else {
                const double R = bp.R.value_or(1.0);
                if (!(R > 0.0)) throw DomainError("eikonal_super needs R > 0");
                const double target = d.gamma * d.theta * std::pow(R, d.s());
                const double cmin = bracket_root([&](double x) { return d.Phi(x) - target; }, d.X_M, 2.0 * d.X_M);
                c = bp.c.value_or(cmin);
                if (c < cmin * (1.0 - 1e-12)) throw DomainError("eikonal_super needs Phi(c) >= gamma theta R^s");
                double Amin = 0.0;
                if (d.sigma > 0.0) {
                    Amin = std::pow(d.gamma * d.theta * c * std::pow(R, -d.gamma - 2.0), 1.0 / p);
                } else {
                    co.r_lo = std::max(opts.r_lo, R);
                    co.r_hi = co.r_lo * (opts.r_hi / opts.r_lo);
                }
                A = bp.A.value_or(Amin);
                if (A < Amin * (1.0 - 1e-12)) throw DomainError("eikonal_super shift A below the required bound");
                b.constants = {{"c", c}, {"A", A}, {"R", R}, {"A_min", Amin}, {"X_M", d.X_M}};
            }
            b.profile = power_profile(c, d.gamma, A, prm, name);
            break;
        }
        case BarrierFamily::riccati_sub:
        case BarrierFamily::riccati_super: {
            need_positive_M(prm);
            const FixedPoints fp = fixed_points(prm);
            if (!fp.xi_M) throw DomainError("Riccati barriers need N/(N-1) < q < 2");
            const ExponentSet e = compute_exponents(prm);
            if (family == BarrierFamily::riccati_super) {
                b.profile = power_profile(*fp.xi_M, e.beta, 0.0, prm, name);
                b.constants = {{"xi_M", *fp.xi_M}};
                break;
            }
            const RiccatiWindow w = riccati_window(prm);
            if (!w.valid) throw DomainError("empty exponent window for the Riccati subsolution");
            const double dd = bp.d.value_or(0.5 * (w.lo + w.hi));
            const double W = -(dd - w.mu2) * (dd - w.mu3);
            if (!(dd > 0.0) || !(W > 0.0) || dd > w.mu1) throw DomainError("d outside the Riccati window");
            const double Amin = std::pow(std::pow(*fp.xi_M, p - 1.0) / W, dd / w.mu1);
            const double A = bp.A.value_or(2.0 * Amin);
            if (A < Amin * (1.0 - 1e-12)) throw DomainError("Riccati subsolution amplitude below the required bound");
            const double xi = *fp.xi_M, beta = e.beta;
            Profile pr;
            const double cut = std::pow(A, -1.0 / dd);
            pr.eval = [xi, beta, A, dd, cut](double r) {
                if (r >= cut) return std::make_pair(0.0, 0.0);
                const double z = A * std::pow(r, dd);
                const double v = xi * std::pow(r, -beta);
                return std::make_pair(v * (1.0 - z), v / r * (-beta * (1.0 - z) - dd * z));
            };
            pr.r_min = 0.0;
            pr.r_max = std::numeric_limits<double>::infinity();
            pr.label = name;
            pr.params = prm;
            b.profile = pr;
            b.constants = {{"xi_M", xi}, {"d", dd}, {"A", A}, {"A_min", Amin}, {"window_lo", w.lo},
                           {"window_hi", w.hi}, {"mu1", w.mu1}, {"mu2", w.mu2}, {"mu3", w.mu3}};
            break;
        }
        case BarrierFamily::emden_sub:
        case BarrierFamily::emden_super: {
            const ExponentSet e = compute_exponents(prm);
            if (!(e.K < 0.0)) throw DomainError("Emden barriers need p < N/(N-2)");
            if (M < 0.0) throw DomainError("Emden barriers need M >= 0");
            const double x0 = std::pow(e.alpha * std::abs(e.K), 1.0 / (p - 1.0));
            if (family == BarrierFamily::emden_sub) {
                b.profile = power_profile(x0, e.alpha, 0.0, prm, name);
                b.constants = {{"x_0", x0}};
                break;
            }
            need_positive_M(prm);
            if (!(e.sigma < 0.0)) throw DomainError("emden_super needs q < 2p/(p+1)");
            const double aq = std::pow(e.alpha, q);
            const double C = bracket_root(
                [&](double x) { return std::pow(x, p - 1.0) - std::pow(x0, p - 1.0) - aq * M * std::pow(x, q - 1.0); },
                x0, 2.0 * x0);
            const double A_printed = M * std::pow(e.alpha, q / p);
            const double A_bound = std::pow(M * aq * std::pow(C, q), 1.0 / p);
            const double A = bp.A.value_or(A_printed);
            if (A < 0.0) throw DomainError("emden_super needs A >= 0");
            b.profile = power_profile(C, e.alpha, A, prm, name);
            b.constants = {{"x_0", x0}, {"C", C}, {"A", A}, {"A_printed", A_printed}, {"A_bound", A_bound}};
            break;
        }
        case BarrierFamily::weak_super: {
            if (!(N > 2.0)) throw DomainError("weak_super needs N >= 3");
            const double nq = (N - 1.0) * q;
            if (!(nq > 2.0) || !(nq < N)) throw DomainError("weak_super needs 2 < (N-1)q < N");
            if (M < 0.0) throw DomainError("weak_super needs M >= 0");
            const double k = bp.k.value_or(1.0);
            if (!(k > 0.0)) throw DomainError("weak_super needs k > 0");
            const double c5 = (nq - 2.0) * (N - nq);
            const double c6 = std::pow(2.0, q - 1.0) * std::max(std::pow(N - 2.0, q), std::pow(nq - 2.0, q));
            const double Mk = c5 / (c6 * (1.0 + std::pow(k, q * q - q)));
            if (M > Mk) throw DomainError(fmt::format("weak_super needs M <= M_k = {}", Mk));
            const double a = std::pow(std::pow(k, q) * (c6 * M + std::pow(k, q * q - q)), 1.0 / p);
            const double kq = std::pow(k, q);
            Profile pr;
            pr.eval = [N, nq, k, kq, a](double r) {
                const double v1 = k * std::pow(r, 2.0 - N), v2 = kq * std::pow(r, 2.0 - nq);
                return std::make_pair(v1 + v2 + a, ((2.0 - N) * v1 + (2.0 - nq) * v2) / r);
            };
            pr.r_min = 0.0;
            pr.r_max = std::numeric_limits<double>::infinity();
            pr.label = name;
            pr.params = prm;
            b.profile = pr;
            b.constants = {{"k", k}, {"a", a}, {"c5", c5}, {"c6", c6}, {"M_k", Mk}};
            break;
        }
    }
    b.certificate = certify(b.profile, is_subsolution_family(family), co);
    return b;
}

}  // namespace radlab
