#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "radlab/errors.hpp"
#include "radlab/orbits.hpp"

using namespace radlab;

TEST_CASE("heteroclinic from the origin to P_M") {
    const ProblemParams prm{3, 2, 4.0 / 3.0, 1};
    const double xm = find_constant_solutions(prm).roots.at(0).x;
    const double al = compute_exponents(prm).alpha;
    const EquilibriumReport src = linearize_planar({0, 0}, prm), dst = linearize_planar({xm, al * xm}, prm);
    const ShootResult r = shoot_connection(src, dst, prm);
    REQUIRE(r.success);
    CHECK(r.status == "success");
    CHECK(r.terminal_distance <= 1e-6 * std::max(1.0, std::hypot(xm, al * xm)));
    CHECK(r.trajectory.t.size() > 10);
    CHECK(std::is_sorted(r.trajectory.t.begin(), r.trajectory.t.end()));
    // the orbit stays in x > 0
    for (const State& s : r.trajectory.states) CHECK(s[0] > 0);

    // K < 0: the origin is a node source; along the slow direction e^{-mu t} c(t) has a finite nonzero limit
    const std::size_t k = src.eigenvalues[0].real() < src.eigenvalues[1].real() ? 0 : 1;
    // the |y|^{q} term adds corrections of relative size d^{q-1}, so the drift shrinks with the window
    const EigenRateResult wide = eigen_rate_check(r.trajectory, src, k, 1e-4);
    const EigenRateResult er = eigen_rate_check(r.trajectory, src, k, 1e-6);
    CHECK(std::isfinite(er.ell));
    CHECK(std::abs(er.ell) > 0);
    CHECK(er.window_points >= 5);
    CHECK(er.residual < wide.residual);
    CHECK(er.ell == doctest::Approx(wide.ell).epsilon(0.1));
}

TEST_CASE("heteroclinic between the two constant solutions") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    const auto roots = find_constant_solutions(prm).roots;
    REQUIRE(roots.size() == 2);
    const double al = compute_exponents(prm).alpha;
    const ShootResult r = shoot_connection(linearize_planar({roots[0].x, al * roots[0].x}, prm),
                                           linearize_planar({roots[1].x, al * roots[1].x}, prm), prm);
    CHECK(r.success);
    CHECK_FALSE(r.connections.empty());
}

TEST_CASE("scaling covariance of regular solutions") {
    // for q = 2p/(p+1), l^alpha u_a(l r) is the regular solution with u(0) = l^alpha a
    const ProblemParams prm{3, 2, 4.0 / 3.0, 1};
    const double al = compute_exponents(prm).alpha, l = 2.0, a = 1.0;
    const RadialProfile u1 = regular_solution(a, prm);
    const RadialProfile u2 = regular_solution(std::pow(l, al) * a, prm);
    REQUIRE(u1.blowup_radius);
    REQUIRE(u2.blowup_radius);
    CHECK(u1.u.front() == doctest::Approx(a).epsilon(1e-6));
    CHECK(*u2.blowup_radius == doctest::Approx(*u1.blowup_radius / l).epsilon(1e-6));
    for (std::size_t i = 1; i < u1.u.size(); ++i) CHECK(u1.u[i] >= u1.u[i - 1]);
    auto interp = [](const RadialProfile& p, double r) {
        const auto it = std::lower_bound(p.r.begin(), p.r.end(), r);
        const std::size_t i = std::clamp<std::size_t>(it - p.r.begin(), 1, p.r.size() - 1);
        const double w = (r - p.r[i - 1]) / (p.r[i] - p.r[i - 1]);
        return (1 - w) * p.u[i - 1] + w * p.u[i];
    };
    for (double f : {0.2, 0.5, 0.8}) {
        const double r = f * *u2.blowup_radius;
        const double lhs = interp(u2, r), rhs = std::pow(l, al) * interp(u1, l * r);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
    }
}

TEST_CASE("regular solution preconditions") {
    CHECK_THROWS_AS(regular_solution(-1.0, {3, 3, 1.8, 1}), DomainError);
    CHECK_THROWS_AS(regular_solution(1.0, {3, 3, 4.0, 1}), DomainError);
}

TEST_CASE("manifold seeds sit at the requested distance") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    const EquilibriumReport o = linearize_planar({0, 0}, prm);
    for (int side : {-1, 1}) {
        const State s = manifold_seed(o, 0, 1e-5, side);
        CHECK(std::hypot(s[0], s[1]) == doctest::Approx(1e-5));
    }
}

TEST_CASE("central manifold decays like 1/r at infinity") {
    const CentralManifoldResult cm = central_manifold_profile({3, 3, 1.5, 1});
    CHECK(cm.t_min < -100);
    CHECK(cm.t_max > 4);
    const State& s = cm.trajectory.states.back();
    const RadialPoint rp = reconstruct(Chart::planar, cm.trajectory.t.back(), s, {3, 3, 1.5, 1});
    CHECK(rp.r * rp.u == doctest::Approx(1.0).epsilon(1e-2));
}

namespace {

double segment_distance(const State& p, const State& a, const State& b) {
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
}

// Largest distance from the points of a to the polyline b.
double one_sided(const std::vector<State>& a, const std::vector<State>& b) {
    double worst = 0;
    for (const State& p : a) {
        double best = INFINITY;
        for (std::size_t i = 1; i < b.size(); ++i) best = std::min(best, segment_distance(p, b[i - 1], b[i]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

TEST_CASE("two seeds on the stable manifold of P_M trace the same orbit") {
    const ProblemParams prm{3, 2, 4.0 / 3.0, 1};
    const double xm = find_constant_solutions(prm).roots.at(0).x;
    const double al = compute_exponents(prm).alpha;
    const EquilibriumReport dst = linearize_planar({xm, al * xm}, prm);
    REQUIRE(dst.stability == Stability::saddle);
    const std::size_t k = dst.eigenvalues[0].real() < 0 ? 0 : 1;
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    io.max_step = 0.005;
    io.stop_fn = [](double, const State& s) { return std::hypot(s[0], s[1]) - 1e-3; };
    // the branch that comes from the origin
    int side = 1;
    if (integrate(Chart::planar, manifold_seed(dst, k, 1e-8, side), 0.0, -200.0, prm, io).event.kind != EventKind::left_domain)
        side = -1;
    const Trajectory a = integrate(Chart::planar, manifold_seed(dst, k, 1e-8, side), 0.0, -200.0, prm, io);
    const Trajectory b = integrate(Chart::planar, manifold_seed(dst, k, 1e-7, side), 0.0, -200.0, prm, io);
    REQUIRE(a.event.kind == EventKind::left_domain);
    REQUIRE(b.event.kind == EventKind::left_domain);
    // compare away from the target, where the seeds themselves differ
    auto far = [&](const Trajectory& tr) {
        std::vector<State> out;
        for (const State& s : tr.states)
            if (std::hypot(s[0] - xm, s[1] - al * xm) > 1e-4) out.push_back(s);
        return out;
    };
    const auto fa = far(a), fb = far(b);
    REQUIRE(fa.size() > 10);
    CHECK(std::max(one_sided(fa, fb), one_sided(fb, fa)) <= 1e-6);
}

TEST_CASE("slope diagnostic converges to the matched exponent") {
    const ProblemParams prm{3, 2, 4.0 / 3.0, 1};
    const double xm = find_constant_solutions(prm).roots.at(0).x;
    const double al = compute_exponents(prm).alpha;
    const ShootResult r = shoot_connection(linearize_planar({0, 0}, prm), linearize_planar({xm, al * xm}, prm), prm);
    REQUIRE(r.success);
    const Diagnostics d = diagnostics(r.trajectory);
    REQUIRE(d.S.back());
    CHECK(std::abs(*d.S.back() - al) < 1e-3);
}
