#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "radlab/errors.hpp"
#include "radlab/params.hpp"

using namespace radlab;

namespace {

// m* from the minimum of z^{p+1} - A z + alpha K over z > 0, by plain bisection on M.
double m_star_oracle(double N, double p) {
    const double alpha = 2.0 / (p - 1.0), K = N - 2.0 - alpha;
    const double s = std::pow(alpha, 2.0 * p / (p + 1.0));
    auto min_value = [&](double M) {
        const double A = M * s;
        const double z0 = std::pow(A / (p + 1.0), 1.0 / p);
        return std::pow(z0, p + 1.0) - A * z0 + alpha * K;
    };
    double lo = 0.0, hi = 1.0;
    while (min_value(hi) > 0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (min_value(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("exponents at (3,3,1.8,1)") {
    const ExponentSet e = compute_exponents({3, 3, 1.8, 1});
    CHECK(e.alpha == doctest::Approx(1.0));
    CHECK(e.beta == doctest::Approx(0.25));
    REQUIRE(e.gamma);
    CHECK(*e.gamma == doctest::Approx(1.5));
    CHECK(e.kappa == doctest::Approx(0.75));
    REQUIRE(e.theta);
    CHECK(*e.theta == doctest::Approx(0.5));
    CHECK(e.sigma == doctest::Approx(1.2));
    CHECK(e.K == doctest::Approx(0.0));
}

TEST_CASE("gamma and theta are absent at q = p") {
    const ExponentSet e = compute_exponents({3, 2, 2, 1});
    CHECK_FALSE(e.gamma);
    CHECK_FALSE(e.theta);
}

TEST_CASE("theta - gamma - 2 + N vanishes") {
    for (double N : {1.0, 2.0, 3.0, 4.5, 7.0})
        for (double p : {1.2, 2.0, 3.0, 6.0})
            for (double q : {1.1, 1.5, 1.9, 2.5, 4.0}) {
                if (std::abs(q - p) < 1e-9) continue;
                const ExponentSet e = compute_exponents({N, p, q, 1});
                CHECK(std::abs(*e.theta - *e.gamma - 2.0 + N) <= 1e-12 * std::max(1.0, std::abs(*e.gamma)));
            }
}

TEST_CASE("sigma has the sign of q - 2p/(p+1) and the classifier agrees") {
    for (double p : {1.5, 2.0, 3.0, 5.0})
        for (double q : {1.05, 1.3, 1.6, 2.0, 2.7}) {
            const ProblemParams prm{3, p, q, 1};
            const double d = q - 2.0 * p / (p + 1.0);
            const ExponentSet e = compute_exponents(prm);
            if (std::abs(d) < 1e-12) continue;
            CHECK((e.sigma > 0) == (d > 0));
            const RegimeReport r = classify_regime(prm);
            CHECK(r.q_vs_scale == (d > 0 ? Position::above : Position::below));
            CHECK_FALSE(r.scale_invariant);
        }
    CHECK(classify_regime({3, 5, 5.0 / 3.0, 1}).scale_invariant);
}

TEST_CASE("m* for N = 3, p = 5") {
    const CriticalMasses cm = critical_masses({3, 5, 5.0 / 3.0, 1});
    CHECK(cm.m_star == doctest::Approx(m_star_oracle(3, 5)).epsilon(1e-10));
    CHECK(std::abs(cm.m_star - 1.5690) < 5e-4);
    CHECK(cm.m_tilde / cm.m_star > 1.47);
}

TEST_CASE("m* vanishes at p = N/(N-2)") {
    CHECK(critical_masses({3, 3, 1.5, 1}).m_star == doctest::Approx(0.0));
}

TEST_CASE("m~ > theta_N m* on a grid") {
    for (double N : {3.0, 4.0, 5.0, 6.0, 8.0})
        for (double f : {1.05, 1.3, 2.0, 4.0}) {
            const double p = f * N / (N - 2.0);
            const CriticalMasses cm = critical_masses({N, p, 2.0 * p / (p + 1.0), 1});
            CHECK(cm.m_star == doctest::Approx(m_star_oracle(N, p)).epsilon(1e-9));
            CHECK(cm.m_tilde > theta_N(N) * cm.m_star);
        }
}

TEST_CASE("critical masses reject subcritical p") {
    CHECK_THROWS_AS(critical_masses({3, 2, 4.0 / 3.0, 1}), DomainError);
}

TEST_CASE("classifier examples") {
    const RegimeReport a = classify_regime({3, 5, 5.0 / 3.0, 1});
    CHECK(a.p_vs_critical == PCritical::supercritical);
    REQUIRE(a.mass_position);
    CHECK(*a.mass_position == MassPosition::below_m_star);
    CHECK(a.expected_root_count == 0);
    CHECK(a.constant_solution_item == 4);

    const RegimeReport b = classify_regime({3, 2, 4.0 / 3.0, -1});
    CHECK(b.constant_solution_item == 1);
    CHECK(b.expected_root_count == 1);

    const RegimeReport c = classify_regime({3, 3, 1.8, 1});
    CHECK(c.q_vs_scale == Position::above);
    auto has = [&](const char* name) {
        return std::any_of(c.laws_at_zero.begin(), c.laws_at_zero.end(), [&](const AsymptoticLaw& l) { return l.name == name; });
    };
    CHECK(has("eikonal"));
    CHECK(has("riccati"));
}

TEST_CASE("equality cases within the threshold tolerance") {
    CHECK(compare(1.0, 1.0 + 5e-13) == Position::equal);
    CHECK(compare(1.0, 1.0 + 5e-12) == Position::below);
    CHECK(is_scale_invariant({3, 5, 5.0 / 3.0, 1}));
    CHECK_FALSE(is_scale_invariant({3, 5, 1.6666666667, 1}));
}

TEST_CASE("classifier is total on the precondition set") {
    for (double N : {1.0, 2.0, 2.5, 3.0, 4.0, 6.0})
        for (double p : {1.1, 1.5, 2.0, 3.0, 5.0, 9.0})
            for (double q : {1.01, 1.2, 1.5, 2.0, 3.0, 9.0})
                for (double M : {-2.0, 0.0, 0.5, 1.0, 3.0}) {
                    RegimeReport r;
                    CHECK_NOTHROW(r = classify_regime({N, p, q, M}));
                    if (N <= 2.0) CHECK(r.p_vs_critical == PCritical::subcritical);
                }
}

TEST_CASE("basic preconditions") {
    CHECK_THROWS_AS(check_basic({3, 1.0, 1.5, 1}), DomainError);
    CHECK_THROWS_AS(check_basic({3, 2.0, 1.0, 1}), DomainError);
    CHECK_THROWS_AS(check_basic({0.5, 2.0, 1.5, 1}), DomainError);
    CHECK_NOTHROW(check_basic({1, 2.0, 1.5, -3}));
}
