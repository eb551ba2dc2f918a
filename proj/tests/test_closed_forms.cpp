#include <doctest.h>

#include <cmath>
#include <sstream>

#include "radlab/closed_forms.hpp"
#include "radlab/equilibria.hpp"
#include "radlab/errors.hpp"

using namespace radlab;

namespace {

const std::vector<double> kGrid = log_grid(1e-3, 1e3, 601);

}  // namespace

TEST_CASE("log grid") {
    const auto g = log_grid(1e-2, 1e2, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(1e-2));
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(g.back() == doctest::Approx(1e2));
}

TEST_CASE("self-similar profiles solve the equation") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    for (const auto& root : find_constant_solutions(prm).roots) CHECK(residual_oracle(selfsimilar(root.x, prm), kGrid) < 1e-8);
    // a wrong amplitude is caught
    Profile off = selfsimilar(find_constant_solutions(prm).roots[0].x, prm);
    const auto exact = off.eval;
    off.eval = [exact](double r) {
        const auto [u, du] = exact(r);
        return std::pair{1.1 * u, 1.1 * du};
    };
    CHECK(residual_oracle(off, kGrid) > 1e-4);
}

TEST_CASE("self-similar needs a root of P_M") {
    CHECK_THROWS_AS(selfsimilar(0.5, {3, 5, 5.0 / 3.0, 2}), DomainError);
    CHECK_THROWS_AS(selfsimilar(0.5, {3, 5, 1.5, 2}), DomainError);
}

TEST_CASE("eikonal harmonic profile") {
    const ProblemParams prm{3, 4, 2, 2.5};
    const Profile pr = eikonal_harmonic(prm);
    CHECK(eikonal_harmonic_constant(prm) == doctest::Approx(std::pow(2.5 * 1.0, 2.0 / 4.0)));
    CHECK(pr.eval(1.0).first == doctest::Approx(eikonal_harmonic_constant(prm)));
    CHECK(residual_oracle(pr, kGrid) < 1e-8);
    CHECK_THROWS_AS(eikonal_harmonic({3, 4, 1.9, 2.5}), DomainError);
}

TEST_CASE("doubly critical explicit profile") {
    for (double M : {0.5, 1.0, 2.0}) {
        const ProblemParams prm{3, 3, 1.5, M};
        const Profile pr = critical_explicit(prm);
        CHECK(pr.eval(1.0).first == doctest::Approx(std::pow(M, 2.0 / 3.0)));
        CHECK(residual_oracle(pr, kGrid) < 1e-8);
    }
    const ProblemParams n4{4, 2, 4.0 / 3.0, 1.5};
    CHECK(critical_explicit(n4).eval(2.0).first == doctest::Approx(std::pow(2.0 * std::pow(1.5, 0.75), 2.0) / 4.0));
    CHECK(residual_oracle(critical_explicit(n4), kGrid) < 1e-8);
}

TEST_CASE("Riccati profiles solve -Δu = M|∇u|^q") {
    for (double C : {0.0, 1.0, 3.0}) CHECK(residual_oracle(riccati_profile(C, {3, 3, 1.8, 1}), kGrid) < 1e-8);
    CHECK(residual_oracle(riccati_profile(2.0, {4, 3, 1.5, 0.5}), kGrid) < 1e-8);
    // kappa = 0 uses the logarithmic form
    CHECK(residual_oracle(riccati_profile(1.0, {3, 3, 1.5, 0.5}), log_grid(1e-3, 1.0, 200)) < 1e-8);
}

TEST_CASE("exterior profile limit r^{N-2} w -> 1/((N-2) C^{1/(q-1)})") {
    const ExteriorProfile ex = exterior_newton_profile(2.0, {3, 3, 1.8, 1});
    CHECK(ex.predicted_limit == doctest::Approx(1.0 / std::pow(2.0, 1.0 / 0.8)));
    CHECK(ex.fitted_limit == doctest::Approx(ex.predicted_limit).epsilon(1e-4));
    // k-matching: C = (1/((N-2)k))^{q-1} gives the limit k
    const double k = 0.3, C = std::pow(1.0 / k, 0.8);
    CHECK(exterior_newton_profile(C, {3, 3, 1.8, 1}).fitted_limit == doctest::Approx(k).epsilon(1e-4));
}

TEST_CASE("barrier certificates") {
    struct Case {
        BarrierFamily f;
        ProblemParams prm;
    };
    for (const Case& c : {Case{BarrierFamily::eikonal_sub, {3, 3, 2, 1}}, Case{BarrierFamily::eikonal_sub_truncated, {3, 6, 2, 1}},
                          Case{BarrierFamily::eikonal_super, {3, 2, 1.2, 1}}, Case{BarrierFamily::riccati_sub, {3, 3, 1.8, 1}},
                          Case{BarrierFamily::riccati_super, {3, 3, 1.8, 1}}, Case{BarrierFamily::emden_sub, {3, 2, 1.2, 1}},
                          Case{BarrierFamily::emden_super, {3, 2, 1.2, 1}}}) {
        CAPTURE(to_string(c.f));
        const Barrier b = barrier(c.f, {}, c.prm);
        CHECK(b.certificate.certified);
        CHECK(b.certificate.claimed == (is_subsolution_family(c.f) ? "subsolution" : "supersolution"));
        CHECK(b.certificate.worst <= 1e-10);
    }
}

TEST_CASE("barrier windows are enforced") {
    CHECK_THROWS_AS(barrier(BarrierFamily::eikonal_sub_truncated, {}, {3, 3, 2, 1}), DomainError);
    CHECK_THROWS_AS(barrier(BarrierFamily::emden_sub, {}, {3, 5, 1.5, 1}), DomainError);
    BarrierParams big;
    big.c = 10.0;
    CHECK_THROWS_AS(barrier(BarrierFamily::eikonal_sub, big, {3, 3, 2, 1}), DomainError);
    CHECK(barrier_family_from_string("riccati_sub") == BarrierFamily::riccati_sub);
    CHECK_THROWS_AS(barrier_family_from_string("nope"), DomainError);
}

TEST_CASE("a supersolution does not certify as a subsolution") {
    const Barrier b = barrier(BarrierFamily::eikonal_super, {}, {3, 2, 1.2, 1});
    const Certificate wrong = certify(b.profile, true, {});
    CHECK_FALSE(wrong.certified);
    CHECK(wrong.violating_r);
}

TEST_CASE("Riccati window endpoints equal mu2 and mu3") {
    for (const ProblemParams& prm : {ProblemParams{3, 3, 1.8, 1}, ProblemParams{4, 3, 1.5, 1}, ProblemParams{3, 4, 1.6, 2}}) {
        const RiccatiWindow w = riccati_window(prm);
        const ExponentSet e = compute_exponents(prm);
        const double mu2 = e.beta, mu3 = (prm.q - 1.0) * e.kappa;
        CHECK(std::abs(w.lo - std::min(mu2, mu3)) <= 1e-12);
        CHECK(w.hi <= std::max(mu2, mu3) + 1e-12);
        CHECK(w.hi <= w.mu1 + 1e-12);
        // endpoints are roots of the window quadratic
        for (double d : {w.mu2, w.mu3}) CHECK(std::abs(-d * d + (mu3 + mu2) * d - mu3 * mu2) < 1e-12);
    }
}

TEST_CASE("Riccati window is open for sigma > 0") {
    const RiccatiWindow w = riccati_window({3, 3, 1.8, 1});
    CHECK(w.valid);
    CHECK(w.lo < w.hi);
    // sigma = 0 closes it: mu1 = 0
    CHECK_FALSE(riccati_window({4, 3, 1.5, 1}).valid);
}

TEST_CASE("Riccati barriers are ordered") {
    const ProblemParams prm{3, 3, 1.8, 1};
    const Barrier sub = barrier(BarrierFamily::riccati_sub, {}, prm), sup = barrier(BarrierFamily::riccati_super, {}, prm);
    const Sandwich s = sandwich_check(sub.profile, sup.profile, log_grid(1e-3, 1e3, 400));
    CHECK(s.ordered);
    CHECK(s.min_gap >= 0);
    CHECK_FALSE(sandwich_check(sup.profile, sub.profile, log_grid(1e-3, 1e3, 400)).ordered);
}

TEST_CASE("profile CSV has one row per radius") {
    std::ostringstream os;
    write_profile_csv(os, critical_explicit({3, 3, 1.5, 1}), log_grid(0.1, 10, 7));
    std::istringstream is(os.str());
    std::string line;
    int n = 0;
    std::getline(is, line);
    CHECK(line == "r,u,du,residual");
    while (std::getline(is, line)) ++n;
    CHECK(n == 7);
}

TEST_CASE("stencils outside the profile interval are rejected") {
    Profile p = critical_explicit({3, 3, 1.5, 1});
    p.r_min = 1.0;
    CHECK_THROWS_AS(residual_oracle(p, {1.0}), DomainError);
    CHECK_NOTHROW(residual_oracle(p, {1.1}));
}
