#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "radlab/equilibria.hpp"
#include "radlab/errors.hpp"
#include "radlab/portrait.hpp"

using namespace radlab;

namespace {

const BBox kBox{0.0, 3.0, -2.0, 4.0};

ProblemParams at_mstar(double f) {
    ProblemParams prm{3, 5, 5.0 / 3.0, 1};
    prm.M = f * critical_masses(prm).m_star;
    return prm;
}

}  // namespace

TEST_CASE("portrait cases") {
    CHECK(vanishing_curves({3, 2, 4.0 / 3.0, 1}, kBox, 100).pcase == PortraitCase::I);
    CHECK(vanishing_curves({3, 5, 5.0 / 3.0, 2}, kBox, 100).pcase == PortraitCase::II);
    CHECK(vanishing_curves(at_mstar(1.0), kBox, 100).pcase == PortraitCase::III);
    CHECK(vanishing_curves({3, 5, 5.0 / 3.0, 1}, kBox, 100).pcase == PortraitCase::IV);
}

TEST_CASE("C1 meets L exactly at the constant solutions") {
    for (const ProblemParams& prm : {ProblemParams{3, 2, 4.0 / 3.0, 1}, ProblemParams{3, 5, 5.0 / 3.0, 2}, at_mstar(1.0),
                                     ProblemParams{3, 5, 5.0 / 3.0, 1}, ProblemParams{4, 3, 1.5, 0.7}}) {
        const RegionMap m = vanishing_curves(prm, kBox, 100);
        const auto roots = find_constant_solutions(prm).roots;
        REQUIRE(m.intersections.size() == roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) {
            CHECK(std::abs(m.intersections[i][0] - roots[i].x) < 1e-9);
            const double y = m.intersections[i][1];
            CHECK(std::abs(y - m.alpha * roots[i].x) < 1e-9);
            CHECK(std::abs(portrait_phi(y, prm) - std::pow(roots[i].x, prm.p)) < 1e-9);
        }
    }
}

TEST_CASE("curves lie in their quadrants and on their equations") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    const RegionMap m = vanishing_curves(prm, kBox, 200);
    CHECK_FALSE(m.C1.empty());
    CHECK_FALSE(m.C4.empty());
    for (const Point& pt : m.C1) {
        CHECK(pt[0] >= 0);
        CHECK(pt[1] >= 0);
        CHECK(std::abs(portrait_phi(pt[1], prm) - std::pow(pt[0], prm.p)) < 1e-9 * std::max(1.0, std::pow(pt[0], prm.p)));
    }
    for (const Point& pt : m.C4) {
        CHECK(pt[0] >= 0);
        CHECK(pt[1] <= 0);
        CHECK(std::abs(portrait_psi(pt[1], prm) - std::pow(pt[0], prm.p)) < 1e-9 * std::max(1.0, std::pow(pt[0], prm.p)));
    }
    for (const Point& pt : m.L) CHECK(pt[1] == doctest::Approx(m.alpha * pt[0]));
}

TEST_CASE("Phi inverse") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    for (double x : {0.1, 0.7, 2.0}) CHECK(portrait_phi(portrait_phi_inverse(x, prm), prm) == doctest::Approx(std::pow(x, prm.p)));
}

TEST_CASE("region labels") {
    const ProblemParams prm{3, 2, 4.0 / 3.0, 1};
    const RegionMap m = vanishing_curves(prm, kBox, 100);
    const double xm = m.intersections.at(0)[0];
    CHECK(region_label({xm, m.alpha * xm + 10}, m) == Region::A);
    CHECK(region_label({0.5, m.alpha * 0.5}, m) == Region::on_L);
    CHECK(region_label({1.0, 0.0}, m) == Region::on_axis);
    CHECK(region_label({-1.0, 0.5}, m) == Region::outside);
    CHECK(region_label({0.3, -5.0}, m) == Region::E);
    const Point h = planar_field({0.3, -5.0}, prm);
    CHECK(h[0] > 0);
    CHECK(h[1] > 0);
}

TEST_CASE("sign patterns of the open regions") {
    CHECK(*region_sign_pattern(Region::A) == std::array<int, 2>{-1, 1});
    CHECK(*region_sign_pattern(Region::B) == std::array<int, 2>{-1, -1});
    CHECK(*region_sign_pattern(Region::C) == std::array<int, 2>{1, -1});
    CHECK(*region_sign_pattern(Region::D) == std::array<int, 2>{1, 1});
    CHECK_FALSE(region_sign_pattern(Region::on_L));
}

TEST_CASE("sampled field matches the region signs in every case") {
    for (const ProblemParams& prm : {ProblemParams{3, 2, 4.0 / 3.0, 1}, ProblemParams{3, 2, 4.0 / 3.0, 3},
                                     ProblemParams{3, 5, 5.0 / 3.0, 2}, at_mstar(1.0), ProblemParams{3, 5, 5.0 / 3.0, 1}}) {
        const FieldGrid g = field_grid(prm, kBox, 81, 81);
        CHECK(g.samples.size() <= 81 * 81);
        const SignCheck sc = sign_pattern_check(g);
        CHECK(sc.pass);
        CHECK(sc.failures == 0);
        CHECK(sc.checked > 1000);
    }
}

TEST_CASE("case IV has no region D, case II has F") {
    std::set<Region> iv, ii;
    for (const auto& s : field_grid({3, 5, 5.0 / 3.0, 1}, kBox, 81, 81).samples) iv.insert(s.region);
    for (const auto& s : field_grid({3, 5, 5.0 / 3.0, 2}, {0.0, 1.0, -1.0, 2.0}, 161, 161).samples) ii.insert(s.region);
    CHECK(iv.count(Region::D) == 0);
    CHECK(ii.count(Region::D) == 1);
    CHECK(ii.count(Region::F) == 1);
}

TEST_CASE("empty box and box errors") {
    const FieldGrid g = field_grid({3, 2, 4.0 / 3.0, 1}, {1.0, 1.0, 0.0, 1.0}, 10, 10);
    CHECK(g.samples.empty());
    CHECK_THROWS_AS(vanishing_curves({3, 2, 4.0 / 3.0, 1}, {-2.0, -1.0, 0.0, 1.0}, 10), DomainError);
    CHECK_THROWS_AS(vanishing_curves({3, 2, 1.5, 1}, kBox, 10), DomainError);
    CHECK_THROWS_AS(vanishing_curves({3, 2, 4.0 / 3.0, -1}, kBox, 10), DomainError);
}

TEST_CASE("field CSV and plot script") {
    const FieldGrid g = field_grid({3, 2, 4.0 / 3.0, 1}, kBox, 5, 4);
    std::ostringstream os;
    write_field_csv(os, g);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,H1,H2,region");
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == g.samples.size());
    std::ostringstream ps;
    write_plot_script(ps, "f.csv", "c.json");
    CHECK(ps.str().find("f.csv") != std::string::npos);
    CHECK(ps.str().find("c.json") != std::string::npos);
}
