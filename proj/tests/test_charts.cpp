#include <doctest.h>

#include <cmath>

#include "radlab/charts.hpp"
#include "radlab/equilibria.hpp"
#include "radlab/errors.hpp"
#include "radlab/portrait.hpp"

using namespace radlab;

TEST_CASE("chart metadata") {
    CHECK(chart_info(Chart::planar).dimension == 2);
    CHECK(chart_info(Chart::planar).autonomous);
    CHECK(chart_info(Chart::order3).dimension == 3);
    CHECK_FALSE(chart_info(Chart::eikonal).autonomous);
    for (Chart c : {Chart::planar, Chart::emden, Chart::riccati, Chart::eikonal, Chart::order3, Chart::order3_desing})
        CHECK(chart_from_string(to_string(c)) == c);
    CHECK_THROWS_AS(chart_from_string("polar"), DomainError);
}

TEST_CASE("planar field vanishes at the constant solutions") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    const double alpha = compute_exponents(prm).alpha;
    for (const auto& r : find_constant_solutions(prm).roots) {
        const State f = chart_rhs(Chart::planar, 0.0, {r.x, alpha * r.x}, prm);
        CHECK(std::hypot(f[0], f[1]) < 1e-9);
    }
    const State o = chart_rhs(Chart::planar, 0.0, {0, 0}, prm);
    CHECK(std::hypot(o[0], o[1]) == 0.0);
}

TEST_CASE("order-3 desingularized field vanishes at (0, xi_M^{q-1}, beta)") {
    const ProblemParams prm{3, 3, 1.8, 1};
    const FixedPoints fp = fixed_points(prm);
    const double beta = compute_exponents(prm).beta;
    const State f = chart_rhs(Chart::order3_desing, 0.0, {0.0, std::pow(*fp.xi_M, prm.q - 1.0), beta}, prm);
    CHECK(std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]) < 1e-9);
}

TEST_CASE("at sigma = 0 the emden and eikonal charts coincide with the planar one") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    for (double t : {-3.0, 0.0, 2.0}) {
        const State s{0.7, 0.4};
        const State a = chart_rhs(Chart::planar, t, s, prm);
        for (Chart c : {Chart::emden, Chart::eikonal}) {
            const State b = chart_rhs(c, t, s, prm);
            CHECK(b[0] == doctest::Approx(a[0]).epsilon(1e-12));
            CHECK(b[1] == doctest::Approx(a[1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("chart transfers round-trip and keep the profile") {
    const ProblemParams prm{3, 3, 1.8, 1};
    const State em{0.6, 0.5};
    for (double t : {-2.0, 0.0, 1.5}) {
        const RadialPoint ref = reconstruct(Chart::emden, t, em, prm);
        for (Chart c : {Chart::riccati, Chart::eikonal, Chart::order3, Chart::order3_desing}) {
            const State s = transfer_state(Chart::emden, c, t, em, prm);
            const RadialPoint rp = reconstruct(c, t, s, prm);
            CHECK(rp.u == doctest::Approx(ref.u).epsilon(1e-12));
            CHECK(rp.du == doctest::Approx(ref.du).epsilon(1e-12));
            const State back = transfer_state(c, Chart::emden, t, s, prm);
            CHECK(back[0] == doctest::Approx(em[0]).epsilon(1e-12));
            CHECK(back[1] == doctest::Approx(em[1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("transfer identity x^{p-1} = X^{p-q} xi^{q-1}") {
    for (const ProblemParams& prm : {ProblemParams{3, 3, 1.8, 1}, ProblemParams{4, 2.5, 1.3, 0.7}}) {
        for (double t : {-1.0, 0.5})
            for (double x : {0.2, 1.0, 3.0}) {
                const State em{x, 0.4 * x};
                const double X = transfer_state(Chart::emden, Chart::eikonal, t, em, prm)[0];
                const double xi = transfer_state(Chart::emden, Chart::riccati, t, em, prm)[0];
                const double rhs = std::pow(X, prm.p - prm.q) * std::pow(xi, prm.q - 1.0);
                CHECK(rhs == doctest::Approx(std::pow(x, prm.p - 1.0)).epsilon(1e-10));
            }
    }
}

TEST_CASE("emden and eikonal integrations reconstruct the same profile") {
    // one decade toward r = 0 at the default tolerances
    const ProblemParams prm{3, 3, 1.8, 1};
    const IntegrateOptions io;
    const double t1 = -std::log(10.0);
    for (const State& em : {State{0.3, 0.3}, State{0.5, 1.0}, State{1.5, 0.5}}) {
        const Trajectory a = integrate(Chart::emden, em, 0.0, t1, prm, io);
        const Trajectory b = integrate(Chart::eikonal, transfer_state(Chart::emden, Chart::eikonal, 0.0, em, prm), 0.0, t1, prm, io);
        REQUIRE(a.event.kind == EventKind::reached_t_end);
        REQUIRE(b.event.kind == EventKind::reached_t_end);
        const RadialPoint ra = reconstruct(Chart::emden, a.t.back(), a.states.back(), prm);
        const RadialPoint rb = reconstruct(Chart::eikonal, b.t.back(), b.states.back(), prm);
        CHECK(ra.r == doctest::Approx(0.1));
        CHECK(std::abs(rb.u - ra.u) <= 10 * io.rtol * std::abs(ra.u));
    }
}

TEST_CASE("order-3 invariant ln xi - ln X - (beta - gamma) t") {
    const ProblemParams prm{3, 3, 1.8, 1};
    const ExponentSet e = compute_exponents(prm);
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    const State s0 = transfer_state(Chart::emden, Chart::order3, 0.0, {0.3, 0.2}, prm);
    const Trajectory tr = integrate(Chart::order3, s0, 0.0, 2.0, prm, io);
    REQUIRE(tr.event.kind == EventKind::reached_t_end);
    const double c0 = std::log(s0[1]) - std::log(s0[0]);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const double v = std::log(tr.states[i][1]) - std::log(tr.states[i][0]) - (e.beta - *e.gamma) * tr.t[i];
        CHECK(std::abs(v - c0) < 1e-8);
    }
}

TEST_CASE("forward then backward integration returns to the start") {
    const ProblemParams prm{3, 2, 4.0 / 3.0, 1};
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    const State s0{0.4, 0.3};
    const Trajectory fw = integrate(Chart::planar, s0, 0.0, 1.5, prm, io);
    REQUIRE(fw.event.kind == EventKind::reached_t_end);
    const Trajectory bw = integrate(Chart::planar, fw.states.back(), 1.5, 0.0, prm, io);
    REQUIRE(bw.event.kind == EventKind::reached_t_end);
    CHECK(std::abs(bw.states.back()[0] - s0[0]) < 1e-7);
    CHECK(std::abs(bw.states.back()[1] - s0[1]) < 1e-7);
}

TEST_CASE("integrate_field handles a linear blow-up and a convergence") {
    IntegrateOptions io;
    io.detect_axis = false;
    // y' = y^2 from y(0) = 1 blows up at t = 1
    const Trajectory bu = integrate_field([](const State& y, State& dy, double) { dy = {y[0] * y[0]}; }, {1.0}, 0.0, 5.0, io);
    CHECK(bu.event.kind == EventKind::blow_up);
    CHECK(bu.event.t == doctest::Approx(1.0).epsilon(1e-4));
    io.equilibria = {{0.0}};
    const Trajectory cv = integrate_field([](const State& y, State& dy, double) { dy = {-y[0]}; }, {1.0}, 0.0, 100.0, io);
    CHECK(cv.event.kind == EventKind::converged_to_equilibrium);
}

TEST_CASE("region C seeds never converge") {
    for (const ProblemParams& prm : {ProblemParams{3, 2, 4.0 / 3.0, 1}, ProblemParams{3, 5, 5.0 / 3.0, 2}}) {
        const BBox box{0.0, 3.0, -2.0, 3.0};
        const RegionMap map = vanishing_curves(prm, box, 200);
        IntegrateOptions io;
        io.equilibria.push_back({0, 0});
        for (const Point& e : map.intersections) io.equilibria.push_back({e[0], e[1]});
        int seeds = 0;
        for (int i = 1; i < 12; ++i)
            for (int j = 1; j < 12; ++j) {
                const Point pt{3.0 * i / 12.0, -2.0 + 5.0 * j / 12.0};
                if (region_label(pt, map) != Region::C) continue;
                ++seeds;
                const Trajectory tr = integrate(Chart::planar, {pt[0], pt[1]}, 0.0, 200.0, prm, io);
                CHECK(tr.event.kind != EventKind::converged_to_equilibrium);
                CHECK((tr.event.kind == EventKind::blow_up || tr.event.kind == EventKind::x_axis_crossing));
            }
        CHECK(seeds > 5);
    }
}

TEST_CASE("Lyapunov diagnostics on an eikonal orbit") {
    const ProblemParams prm{3, 3, 1.8, 1};
    const Trajectory tr = integrate(Chart::eikonal, {0.5, 0.5}, 0.0, 3.0, prm);
    const Diagnostics d = diagnostics(tr);
    CHECK(d.t.size() == tr.t.size());
    CHECK(d.E.size() == tr.t.size());
    CHECK(d.monotone);
}

TEST_CASE("a priori growth bounds") {
    const ProblemParams prm{3, 3, 1.8, 1};
    const double g = *compute_exponents(prm).gamma;
    const double XM = *fixed_points(prm).X_M;
    std::vector<double> r, u, du, u2, du2;
    for (int i = 0; i <= 60; ++i) {
        const double x = std::pow(10.0, -6.0 + 0.1 * i);
        r.push_back(x);
        u.push_back(XM * std::pow(x, -g));
        du.push_back(-g * XM * std::pow(x, -g - 1));
        u2.push_back(std::pow(x, -2 * g));
        du2.push_back(-2 * g * std::pow(x, -2 * g - 1));
    }
    CHECK(apriori_check(r, u, du, prm).pass);
    CHECK_FALSE(apriori_check(r, u2, du2, prm).pass);
}

TEST_CASE("a step cap keeps the direction of backward runs") {
    const ProblemParams prm{3, 3, 1.8, 1};
    IntegrateOptions io;
    io.max_step = 0.01;
    const Trajectory tr = integrate(Chart::emden, {0.5, 0.5}, 0.0, -1.0, prm, io);
    REQUIRE(tr.event.kind == EventKind::reached_t_end);
    CHECK(tr.t.back() == -1.0);
    CHECK(tr.t.size() >= 100);
    for (std::size_t i = 1; i < tr.t.size(); ++i) {
        CHECK(tr.t[i] < tr.t[i - 1]);
        CHECK(tr.t[i - 1] - tr.t[i] <= 0.01 + 1e-12);
    }
    const Trajectory free = integrate(Chart::emden, {0.5, 0.5}, 0.0, -1.0, prm);
    CHECK(tr.states.back()[0] == doctest::Approx(free.states.back()[0]).epsilon(1e-8));
}
