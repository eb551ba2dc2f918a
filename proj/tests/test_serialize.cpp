#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "radlab/serialize.hpp"

using namespace radlab;

namespace {

template <typename T>
void round_trip(const T& value) {
    const std::string first = dump(json(value));
    const T back = json::parse(first).get<T>();
    CHECK(dump(json(back)) == first);
}

}  // namespace

TEST_CASE("doubles survive a round trip bit for bit") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-8}) {
        const json j = v;
        CHECK(json::parse(j.dump()).get<double>() == v);
    }
}

TEST_CASE("round trips of every reported type") {
    const ProblemParams prm{3, 5, 5.0 / 3.0, 2};
    round_trip(prm);
    round_trip(compute_exponents({3, 3, 1.8, 1}));
    round_trip(compute_exponents({3, 2, 2, 1}));
    round_trip(classify_regime(prm));
    round_trip(classify_regime({3, 3, 1.8, 1}));
    round_trip(find_constant_solutions(prm));
    round_trip(fixed_points({3, 3, 1.8, 1}));
    round_trip(linearize_planar({0, 0}, prm));
    round_trip(linearize_order3({3, 3, 1.8, 1}));
    round_trip(bifurcation_check(prm, 3));
    round_trip(integrate(Chart::planar, {0.4, 0.3}, 0.0, 1.0, prm));
    round_trip(barrier(BarrierFamily::riccati_sub, {}, {3, 3, 1.8, 1}));
    round_trip(riccati_window({3, 3, 1.8, 1}));
    round_trip(vanishing_curves(prm, {0, 2, -1, 2}, 20));
    round_trip(sign_pattern_check(field_grid(prm, {0, 2, -1, 2}, 11, 11)));
    round_trip(run_criterion(1));
}

TEST_CASE("complex eigenvalues serialize as pairs") {
    const json j = std::complex<double>(1.5, -2.0);
    CHECK(j == json::array({1.5, -2.0}));
    CHECK(j.get<std::complex<double>>() == std::complex<double>(1.5, -2.0));
}

TEST_CASE("absent optionals become null") {
    const ExponentSet e = compute_exponents({3, 2, 2, 1});
    const json j = e;
    CHECK(j.at("gamma").is_null());
    CHECK(j.at("theta").is_null());
}

TEST_CASE("enums use their names") {
    CHECK(json(Region::B_tilde) == "B~");
    CHECK(json(MassPosition::below_m_star) == "below_m_star");
    CHECK(json("order3").get<Chart>() == Chart::order3);
}

TEST_CASE("output is deterministic") {
    const ProblemParams prm{3, 2, 4.0 / 3.0, 1};
    CHECK(dump(json(classify_regime(prm))) == dump(json(classify_regime(prm))));
    const auto a = integrate(Chart::planar, {0.4, 0.3}, 0.0, 2.0, prm);
    const auto b = integrate(Chart::planar, {0.4, 0.3}, 0.0, 2.0, prm);
    CHECK(dump(json(a)) == dump(json(b)));
}

TEST_CASE("atomic write replaces the file") {
    const auto path = (std::filesystem::temp_directory_path() / "radlab_atomic_test.json").string();
    write_file_atomic(path, "first\n");
    write_file_atomic(path, "second\n");
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    CHECK(ss.str() == "second\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove(path);
}
