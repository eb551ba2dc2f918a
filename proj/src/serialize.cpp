#include "radlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

// JSON has no infinity: an unbounded interval end is written as null.
json bound(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double unbound(const json& j, double inf) { return j.is_null() ? inf : j.get<double>(); }

}  // namespace

void to_json(json& j, const Barrier& b) {
    j = json{{"family", b.family},
             {"label", b.profile.label},
             {"params", b.profile.params},
             {"operator", b.profile.op},
             {"r_min", bound(b.profile.r_min)},
             {"r_max", bound(b.profile.r_max)},
             {"certificate", b.certificate},
             {"constants", b.constants}};
}

void from_json(const json& j, Barrier& b) {
    b.family = j.at("family").get<BarrierFamily>();
    b.profile.label = j.at("label").get<std::string>();
    b.profile.params = j.at("params").get<ProblemParams>();
    b.profile.op = j.at("operator").get<Operator>();
    const double inf = std::numeric_limits<double>::infinity();
    b.profile.r_min = unbound(j.at("r_min"), -inf);
    b.profile.r_max = unbound(j.at("r_max"), inf);
    b.certificate = j.at("certificate").get<Certificate>();
    b.constants = j.at("constants").get<std::map<std::string, double>>();
}

void to_json(json& j, const HardyResult& h) {
    j = json{{"n", h.n},
             {"limit", h.limit},
             {"predicted", h.predicted},
             {"theta0", h.theta0},
             {"dtheta0", h.dtheta0},
             {"shot_dtheta0", h.shot_dtheta0},
             {"shoot_mismatch", h.shoot_mismatch},
             {"shift_lo", h.shift_lo},
             {"shift_hi", h.shift_hi},
             {"t", h.t},
             {"theta", h.theta},
             {"dtheta", h.dtheta}};
}

void from_json(const json& j, HardyResult& h) {
    h.n = j.at("n").get<double>();
    h.limit = j.at("limit").get<double>();
    h.predicted = j.at("predicted").get<double>();
    h.theta0 = j.at("theta0").get<double>();
    h.dtheta0 = j.at("dtheta0").get<double>();
    h.shot_dtheta0 = j.at("shot_dtheta0").get<double>();
    h.shoot_mismatch = j.at("shoot_mismatch").get<double>();
    h.shift_lo = j.at("shift_lo").get<double>();
    h.shift_hi = j.at("shift_hi").get<double>();
    h.t = j.at("t").get<std::vector<double>>();
    h.theta = j.at("theta").get<std::vector<double>>();
    h.dtheta = j.at("dtheta").get<std::vector<double>>();
    h.eval = nullptr;
}

void to_json(json& j, const RegionMap& m) {
    j = json{{"case", m.pcase},
             {"params", m.params},
             {"alpha", m.alpha},
             {"K", m.K},
             {"m_star", m.m_star},
             {"bbox", m.bbox},
             {"curves", {{"L", m.L}, {"C1", m.C1}, {"C4", m.C4}}},
             {"equilibria", m.intersections},
             {"split_x", m.split_x}};
}

void from_json(const json& j, RegionMap& m) {
    m.pcase = j.at("case").get<PortraitCase>();
    m.params = j.at("params").get<ProblemParams>();
    m.alpha = j.at("alpha").get<double>();
    m.K = j.at("K").get<double>();
    m.m_star = j.at("m_star").get<std::optional<double>>();
    m.bbox = j.at("bbox").get<BBox>();
    const json& c = j.at("curves");
    m.L = c.at("L").get<std::vector<Point>>();
    m.C1 = c.at("C1").get<std::vector<Point>>();
    m.C4 = c.at("C4").get<std::vector<Point>>();
    m.intersections = j.at("equilibria").get<std::vector<Point>>();
    m.split_x = j.at("split_x").get<std::vector<double>>();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw DomainError("cannot write " + path);
        os << contents;
        if (!os) throw DomainError("cannot write " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw DomainError("cannot write " + path + ": " + ec.message());
    }
}

}  // namespace radlab
