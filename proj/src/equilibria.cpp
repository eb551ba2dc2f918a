#include "radlab/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

void require_scale_invariant(const ProblemParams& prm) {
    check_basic(prm);
    if (!is_scale_invariant(prm)) throw DomainError("P_M needs q = 2p/(p+1)");
}

double pm_coef(const ProblemParams& prm) {
    const double a = 2.0 / (prm.p - 1.0);
    return prm.M * std::pow(a, 2.0 * prm.p / (prm.p + 1.0));
}

double pm_tilde_raw(double z, const ProblemParams& prm, double ell) {
    return std::pow(z, prm.p + 1.0) - pm_coef(prm) * z + ell;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    boost::uintmax_t it = 300;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), it);
    return 0.5 * (r.first + r.second);
}

}  // namespace

double eval_pm(double x, const ProblemParams& prm) {
    const ExponentSet e = compute_exponents(prm);
    return std::pow(x, prm.p - 1.0) - pm_coef(prm) * std::pow(x, (prm.p - 1.0) / (prm.p + 1.0)) + e.ell;
}

double eval_pm_derivative(double x, const ProblemParams& prm) {
    const double p = prm.p;
    const double s = (p - 1.0) / (p + 1.0);
    return (p - 1.0) * std::pow(x, p - 2.0) - pm_coef(prm) * s * std::pow(x, s - 1.0);
}

double eval_pm_tilde(double z, const ProblemParams& prm) {
    return pm_tilde_raw(z, prm, compute_exponents(prm).ell);
}

ConstantSolutionSet find_constant_solutions(const ProblemParams& prm) {
    require_scale_invariant(prm);
    const double p = prm.p, M = prm.M;
    const ExponentSet e = compute_exponents(prm);
    // K within the threshold tolerance is the critical case K = 0, as in classify_regime
    const double ell = compare(e.K, 0.0) == Position::equal ? 0.0 : e.ell;
    const double coef = pm_coef(prm);
    auto f = [&](double z) { return pm_tilde_raw(z, prm, ell); };
    auto to_x = [&](double z) { return std::pow(z, (p + 1.0) / (p - 1.0)); };
    auto grow = [&](double lo) {
        double hi = std::max(1.0, 2.0 * lo);
        while (f(hi) <= 0.0) hi *= 2.0;
        return hi;
    };
    ConstantSolutionSet out;
    const std::string single = M == 0.0 ? "x_0" : "x_M";

    if (M <= 0.0) {
        // P~ is increasing: one root iff P~(0) = ell < 0
        if (ell < 0.0) out.roots.push_back({to_x(bisect_root(f, 0.0, grow(0.0))), 1, single});
        return out;
    }
    const double z0 = std::pow(M / (p + 1.0), 1.0 / p) * std::pow(2.0 / (p - 1.0), 2.0 / (p + 1.0));
    const double fmin = f(z0);
    if (ell <= 0.0) {
        // P~(0) <= 0 and the only positive zero sits on the increasing branch
        out.roots.push_back({to_x(bisect_root(f, z0, grow(z0))), 1, single});
        return out;
    }
    const double scale = std::max({1.0, ell, coef * z0});
    if (std::abs(fmin) <= 1e-11 * scale) {
        out.roots.push_back({to_x(z0), 2, "x_mstar"});
        return out;
    }
    if (fmin > 0.0) return out;
    out.roots.push_back({to_x(bisect_root(f, 0.0, z0)), 1, "x_1M"});
    out.roots.push_back({to_x(bisect_root(f, z0, grow(z0))), 1, "x_2M"});
    return out;
}

FixedPoints fixed_points(const ProblemParams& prm) {
    const ExponentSet e = compute_exponents(prm);
    const double N = prm.N, p = prm.p, q = prm.q, M = prm.M;
    FixedPoints fp;
    if (M > 0.0 && q < p && e.gamma)
        fp.X_M = std::pow(M * std::pow(*e.gamma, q), 1.0 / (p - q));
    if (M > 0.0 && N > 1.0 && compare(q, N / (N - 1.0)) == Position::above &&
        compare(q, 2.0) == Position::below) {
        fp.eta_M = std::pow(e.kappa / M, 1.0 / (q - 1.0));
        fp.xi_M = *fp.eta_M / e.beta;
    }
    if (compare(e.K, 0.0) != Position::equal) fp.x_0 = std::pow(e.alpha * std::abs(e.K), 1.0 / (p - 1.0));
    return fp;
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::saddle: return "saddle";
        case Stability::node_source: return "node-source";
        case Stability::node_sink: return "node-sink";
        case Stability::focus_source: return "focus-source";
        case Stability::focus_sink: return "focus-sink";
        case Stability::center: return "center";
        case Stability::degenerate: return "degenerate";
        case Stability::non_hyperbolic: return "non-hyperbolic";
    }
    return "?";
}

void eigen_decompose(const Matrix& J, std::vector<std::complex<double>>& values,
                     std::vector<std::vector<double>>& vectors) {
    const int n = static_cast<int>(J.size());
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = J[i][j];
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw NumericalError("eigen decomposition failed");
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    const auto ev = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (ev[a].real() != ev[b].real()) return ev[a].real() < ev[b].real();
        return ev[a].imag() < ev[b].imag();
    });
    values.clear();
    vectors.clear();
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    for (int k : order) {
        values.push_back(ev[k]);
        std::vector<double> v;
        if (std::abs(ev[k].imag()) <= 1e-12 * scale) {
            Eigen::VectorXcd c = es.eigenvectors().col(k);
            int lead = 0;
            const double cmax = c.cwiseAbs().maxCoeff();
            while (lead < n && std::abs(c[lead]) <= 1e-12 * cmax) ++lead;
            for (int i = 0; i < n; ++i) {
                const double x = (c[i] / c[lead]).real();
                v.push_back(std::abs(c[i]) <= 1e-13 * cmax ? 0.0 : x);
            }
        }
        vectors.push_back(std::move(v));
    }
}

namespace {

Stability classify_spectrum(const std::vector<std::complex<double>>& ev, double scale) {
    const double tol = 1e-9 * scale;
    bool any_zero = false, any_pos = false, any_neg = false, complex = false;
    for (const auto& l : ev) {
        if (std::abs(l.imag()) > tol) complex = true;
        if (std::abs(l.real()) <= tol) any_zero = true;
        else if (l.real() > 0) any_pos = true;
        else any_neg = true;
    }
    if (complex) {
        if (any_zero) return Stability::center;
        return any_pos ? Stability::focus_source : Stability::focus_sink;
    }
    if (any_zero) return Stability::non_hyperbolic;
    if (any_pos && any_neg) return Stability::saddle;
    for (std::size_t i = 0; i + 1 < ev.size(); ++i)
        if (std::abs(ev[i] - ev[i + 1]) <= tol) return Stability::degenerate;
    return any_pos ? Stability::node_source : Stability::node_sink;
}

}  // namespace

EquilibriumReport linearize_planar(const std::vector<double>& point, const ProblemParams& prm,
                                   double tol_eq) {
    require_scale_invariant(prm);
    if (point.size() != 2) throw DomainError("planar point needs two coordinates");
    const ExponentSet e = compute_exponents(prm);
    const double p = prm.p, q = prm.q, M = prm.M, x = point[0], y = point[1];
    const double fx = e.alpha * x - y;
    const double fy = -e.K * y - std::copysign(std::pow(std::abs(x), p), x) + M * std::pow(std::abs(y), q);
    const double res = std::hypot(fx, fy);
    if (res > tol_eq * std::max(1.0, std::hypot(x, y)))
        throw DomainError("point is not an equilibrium of the planar system");

    EquilibriumReport r;
    r.chart = "planar";
    r.location = point;
    r.residual = res;
    const double c = q * M * std::pow(std::abs(y), q - 1.0) * (y < 0 ? -1.0 : 1.0);
    r.jacobian = {{e.alpha, -1.0}, {-p * std::pow(std::abs(x), p - 1.0), -e.K + (y == 0.0 ? 0.0 : c)}};
    const double tr = r.jacobian[0][0] + r.jacobian[1][1];
    const double det = r.jacobian[0][0] * r.jacobian[1][1] - r.jacobian[0][1] * r.jacobian[1][0];
    r.char_poly = {1.0, -tr, det};
    const double scale = std::max({1.0, std::abs(e.alpha), std::abs(e.K)});

    if (x == 0.0 && y == 0.0) {
        // closed form: lambda = -K along (1, N-2), lambda = alpha along (1, 0)
        r.eigenvalues = {std::complex<double>(-e.K, 0.0), std::complex<double>(e.alpha, 0.0)};
        r.eigenvectors = {{1.0, prm.N - 2.0}, {1.0, 0.0}};
        r.degenerate_spectrum = std::abs(e.alpha + e.K) <= 1e-12 * scale;
        if (r.degenerate_spectrum) r.eigenvectors = {{1.0, 0.0}, {1.0, 0.0}};
        r.stability = classify_spectrum(r.eigenvalues, scale);
        if (r.degenerate_spectrum && r.stability != Stability::non_hyperbolic)
            r.stability = Stability::degenerate;
        return r;
    }
    eigen_decompose(r.jacobian, r.eigenvalues, r.eigenvectors);
    r.degenerate_spectrum = std::abs(r.eigenvalues[0] - r.eigenvalues[1]) <= 1e-9 * scale;
    r.stability = classify_spectrum(r.eigenvalues, scale);
    return r;
}

EquilibriumReport linearize_order3(const ProblemParams& prm) {
    const ExponentSet e = compute_exponents(prm);
    const double N = prm.N, p = prm.p, q = prm.q, M = prm.M;
    if (!(M > 0.0) || !(q < p) || N <= 1.0 || compare(q, N / (N - 1.0)) != Position::above ||
        compare(q, 2.0) != Position::below)
        throw DomainError("order-3 linearization needs N/(N-1) < q < 2, q < p, M > 0");
    const double beta = e.beta, kappa = e.kappa;
    const double xh = kappa / (M * std::pow(beta, q - 1.0));
    EquilibriumReport r;
    r.chart = "order3_desing";
    r.location = {0.0, xh, beta};
    const double mu1 = e.sigma / (q - 1.0), mu2 = beta, mu3 = (N - 1.0) * q - N;
    r.jacobian = {{mu1, 0.0, 0.0},
                  {0.0, 0.0, -(q - 1.0) * xh},
                  {-xh, M * std::pow(beta, q), beta + kappa * (q - 1.0)}};
    // residual of the desingularized field at the location
    const double s_t = beta * (beta + 2.0 - N) + xh * (M * std::pow(beta, q));
    r.residual = std::abs(s_t);
    r.closed_form_eigenvalues = {mu1, mu2, mu3};
    eigen_decompose(r.jacobian, r.eigenvalues, r.eigenvectors);
    const double scale = std::max({1.0, std::abs(mu1), std::abs(mu2), std::abs(mu3)});
    const double tol = 1e-9 * scale;
    r.degenerate_spectrum = std::abs(mu1 - mu2) <= tol || std::abs(mu1 - mu3) <= tol ||
                            std::abs(mu2 - mu3) <= tol;
    r.stability = classify_spectrum(r.eigenvalues, scale);
    if (r.degenerate_spectrum && r.stability != Stability::non_hyperbolic)
        r.stability = Stability::degenerate;
    if (!r.degenerate_spectrum) {
        // printed second component of u1, recorded against the computed eigenvector
        const double b = -mu3 / (M * std::pow(mu2, q - 1.0) * mu1);
        r.printed_b = b;
        for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
            if (std::abs(r.eigenvalues[i].real() - mu1) <= tol && !r.eigenvectors[i].empty()) {
                const double got = r.eigenvectors[i][1];
                r.printed_b_agrees = std::abs(got - b) <= 1e-8 * std::max(1.0, std::abs(b));
            }
        }
    }
    return r;
}

std::vector<BifurcationEntry> bifurcation_check(const ProblemParams& prm, int k_max) {
    require_scale_invariant(prm);
    const RegimeReport reg = classify_regime(prm);
    if (reg.p_vs_critical != PCritical::supercritical || !(prm.M > 0.0) || reg.expected_root_count != 2)
        throw DomainError("bifurcation check needs p > N/(N-2) and M > m*");
    const ConstantSolutionSet roots = find_constant_solutions(prm);
    std::vector<BifurcationEntry> out;
    for (int k = 1; k <= k_max; ++k) {
        const double lk = k * (prm.N - 2.0 + k);
        for (const auto& rt : roots.roots) {
            BifurcationEntry b;
            b.k = k;
            b.root_label = rt.label;
            b.root = rt.x;
            b.value = lk + rt.x * eval_pm_derivative(rt.x, prm);
            b.nonresonant = std::abs(b.value) > 1e-10 * std::max(1.0, lk);
            out.push_back(b);
        }
    }
    return out;
}

}  // namespace radlab
