// Command-line front end: every subcommand writes JSON (or CSV) to --out or stdout.
// Exit codes: 0 ok, 1 acceptance failure, 2 usage, 3 domain, 4 numerical.

#include <CLI11.hpp>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <sstream>

#include "radlab/acceptance.hpp"
#include "radlab/asymptotics.hpp"
#include "radlab/charts.hpp"
#include "radlab/closed_forms.hpp"
#include "radlab/equilibria.hpp"
#include "radlab/errors.hpp"
#include "radlab/orbits.hpp"
#include "radlab/params.hpp"
#include "radlab/portrait.hpp"
#include "radlab/serialize.hpp"

using namespace radlab;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts decimals and fractions such as 5/3.
double parse_real(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(s, &used);
            if (used != s.size()) throw UsageError("not a number: " + s);
            return v;
        }
        const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        std::size_t ua = 0, ub = 0;
        const double num = std::stod(a, &ua), den = std::stod(b, &ub);
        if (ua != a.size() || ub != b.size() || den == 0.0) throw UsageError("not a number: " + s);
        return num / den;
    } catch (const std::logic_error&) {
        throw UsageError("not a number: " + s);
    }
}

std::vector<double> parse_list(const std::string& s, std::size_t n_expected, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_real(item));
    if (n_expected && v.size() != n_expected)
        throw UsageError(std::string(what) + " needs " + std::to_string(n_expected) + " comma-separated values");
    return v;
}

// Flag values as given; empty when absent so a config file can fill them.
struct Flags {
    std::string N, p, q, M;
    std::string chart, rtol, atol, t0, t1, out, bbox, grid, config;
};

struct Config {
    ProblemParams prm;
    Chart chart = Chart::planar;
    double rtol = 1e-10, atol = 1e-12;
    double t0 = 0, t1 = 10;
    std::string out;
    BBox bbox{0.0, 4.0, -4.0, 8.0};
    std::size_t nx = 41, ny = 41;
    bool has_bbox = false;
};

Config resolve(const Flags& f) {
    Config c;
    json cfg = json::object();
    if (!f.config.empty()) {
        std::ifstream is(f.config);
        if (!is) throw UsageError("cannot read config " + f.config);
        try {
            cfg = json::parse(is);
        } catch (const json::exception& e) {
            throw UsageError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    }
    // flags override the config file, which overrides defaults
    auto real = [&](const std::string& flag, const char* key, double& dst) {
        if (!flag.empty())
            dst = parse_real(flag);
        else if (cfg.contains(key))
            dst = cfg[key].is_string() ? parse_real(cfg[key].get<std::string>()) : cfg[key].get<double>();
    };
    auto text = [&](const std::string& flag, const char* key) -> std::string {
        if (!flag.empty()) return flag;
        if (cfg.contains(key)) {
            const json& v = cfg[key];
            if (v.is_string()) return v.get<std::string>();
            if (v.is_array()) {
                std::string s;
                for (const auto& e : v) s += (s.empty() ? "" : ",") + e.dump();
                return s;
            }
        }
        return {};
    };
    try {
        real(f.N, "N", c.prm.N);
        real(f.p, "p", c.prm.p);
        real(f.q, "q", c.prm.q);
        real(f.M, "M", c.prm.M);
        real(f.rtol, "rtol", c.rtol);
        real(f.atol, "atol", c.atol);
        real(f.t0, "t0", c.t0);
        real(f.t1, "t1", c.t1);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
    if (!(c.rtol > 0.0) || !(c.atol > 0.0)) throw UsageError("tolerances must be positive");
    if (const std::string ch = text(f.chart, "chart"); !ch.empty()) {
        try {
            c.chart = chart_from_string(ch);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    c.out = text(f.out, "out");
    if (const std::string b = text(f.bbox, "bbox"); !b.empty()) {
        const auto v = parse_list(b, 4, "--bbox");
        c.bbox = {v[0], v[1], v[2], v[3]};
        c.has_bbox = true;
    }
    if (const std::string g = text(f.grid, "grid"); !g.empty()) {
        const auto v = parse_list(g, 2, "--grid");
        if (!(v[0] >= 1.0) || !(v[1] >= 1.0)) throw UsageError("--grid needs positive sizes");
        c.nx = static_cast<std::size_t>(v[0]);
        c.ny = static_cast<std::size_t>(v[1]);
    }
    return c;
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty() || c.out == "-")
        std::cout << text;
    else
        write_file_atomic(c.out, text);
}

IntegrateOptions integ_opts(const Config& c) {
    IntegrateOptions o;
    o.rtol = c.rtol;
    o.atol = c.atol;
    return o;
}

json classify_json(const ProblemParams& prm) {
    check_basic(prm);
    json j{{"params", prm}, {"exponents", compute_exponents(prm)}, {"regime", classify_regime(prm)}};
    // M against m* whenever m* is defined, also off the scale invariant line
    if (prm.N >= 3.0 && prm.p >= prm.N / (prm.N - 2.0)) {
        const CriticalMasses cm = critical_masses(prm);
        j["critical_masses"] = cm;
        j["M_vs_m_star"] = compare(prm.M, cm.m_star, kThresholdTol * std::max(1.0, cm.m_star));
        j["M_below_m_star"] = prm.M < cm.m_star;
    }
    return j;
}

std::vector<EquilibriumReport> planar_equilibria(const ProblemParams& prm) {
    const double a = compute_exponents(prm).alpha;
    std::vector<EquilibriumReport> v{linearize_planar({0.0, 0.0}, prm)};
    for (const auto& r : find_constant_solutions(prm).roots) v.push_back(linearize_planar({r.x, a * r.x}, prm));
    return v;
}

EquilibriumReport pick_equilibrium(const std::string& label, const ProblemParams& prm) {
    if (label == "origin") return linearize_planar({0.0, 0.0}, prm);
    const double a = compute_exponents(prm).alpha;
    for (const auto& r : find_constant_solutions(prm).roots)
        if (r.label == label) return linearize_planar({r.x, a * r.x}, prm);
    throw DomainError("no equilibrium labelled " + label + " for these parameters");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    const int dim = chart_info(tr.chart).dimension;
    os << "t";
    for (int i = 0; i < dim; ++i) os << ",s" << i;
    os << ",r,u,du\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        os << fmt::format("{:.17g}", tr.t[i]);
        for (double v : tr.states[i]) os << fmt::format(",{:.17g}", v);
        const RadialPoint rp = reconstruct(tr.chart, tr.t[i], tr.states[i], tr.params);
        os << fmt::format(",{:.17g},{:.17g},{:.17g}\n", rp.r, rp.u, rp.du);
    }
}

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

int fail(int code, const char* kind, const std::string& msg) {
    std::cerr << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial solutions of -Δu + u^p - M|∇u|^q = 0: regimes, charts, orbits, barriers and portraits"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* s) {
        s->add_option("-N", f.N, "dimension");
        s->add_option("-p", f.p, "absorption exponent (decimal or a/b)");
        s->add_option("-q", f.q, "gradient exponent (decimal or a/b)");
        s->add_option("-M", f.M, "gradient coefficient");
        s->add_option("--config", f.config, "JSON config; flags take precedence");
        s->add_option("--out", f.out, "output path (stdout when absent)");
    };
    auto integ = [&](CLI::App* s) {
        s->add_option("--rtol", f.rtol, "relative tolerance");
        s->add_option("--atol", f.atol, "absolute tolerance");
        s->add_option("--t0", f.t0, "initial t = ln r");
        s->add_option("--t1", f.t1, "final t (may be below t0)");
    };

    auto* c_classify = app.add_subcommand("classify", "exponents, thresholds and behaviour-law catalog");
    common(c_classify);
    auto* c_equil = app.add_subcommand("equilibria", "constant solutions and chart fixed points");
    common(c_equil);
    auto* c_lin = app.add_subcommand("linearize", "Jacobians, spectra and stability");
    common(c_lin);
    std::string lin_point;
    bool lin_order3 = false;
    c_lin->add_option("--point", lin_point, "planar point x,y (default: every planar equilibrium)");
    c_lin->add_flag("--order3", lin_order3, "linearize the order-3 system at its Riccati point");

    auto* c_int = app.add_subcommand("integrate", "integrate a chart; CSV when --out ends in .csv");
    common(c_int);
    integ(c_int);
    c_int->add_option("--chart", f.chart, "planar, emden, riccati, eikonal, order3, order3_desing");
    std::string init;
    c_int->add_option("--init", init, "initial state, comma-separated")->required();

    auto* c_shoot = app.add_subcommand("shoot", "heteroclinic connection between planar equilibria");
    common(c_shoot);
    integ(c_shoot);
    std::string from, to;
    c_shoot->add_option("--from", from, "origin, x_M, x_1M, x_2M or x_mstar");
    c_shoot->add_option("--to", to, "target label");

    auto* c_portrait = app.add_subcommand("portrait", "vanishing curves, regions and sampled field");
    common(c_portrait);
    c_portrait->add_option("--bbox", f.bbox, "x_min,x_max,y_min,y_max");
    c_portrait->add_option("--grid", f.grid, "nx,ny");

    auto* c_verify = app.add_subcommand("verify", "acceptance suite, one PASS/FAIL line per criterion");
    std::string suite = "all";
    c_verify->add_option("--suite", suite, "all or comma-separated criterion ids");
    c_verify->add_option("--out", f.out, "JSON report path");

    auto* c_bar = app.add_subcommand("barriers", "sub/supersolution families with sampled sign certificates");
    common(c_bar);
    std::string family = "all";
    std::string bc, bA, bR, bd, bk;
    double r_lo = 1e-3, r_hi = 1e3;
    std::size_t n_points = 1000;
    c_bar->add_option("--family", family, "family name or all");
    c_bar->add_option("--c", bc, "eikonal amplitude");
    c_bar->add_option("--A", bA, "shift or cut-off amplitude");
    c_bar->add_option("--R", bR, "eikonal super radius");
    c_bar->add_option("--d", bd, "Riccati exponent");
    c_bar->add_option("--k", bk, "weak singularity amplitude");
    c_bar->add_option("--r-lo", r_lo, "certificate grid start");
    c_bar->add_option("--r-hi", r_hi, "certificate grid end");
    c_bar->add_option("--points", n_points, "certificate grid size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "usage", e.what());
    }

    try {
        const Config cfg = resolve(f);
        const ProblemParams& prm = cfg.prm;
        if (*c_classify) {
            emit(cfg, dump(classify_json(prm)));
        } else if (*c_equil) {
            check_basic(prm);
            json j{{"params", prm}, {"fixed_points", fixed_points(prm)}};
            if (is_scale_invariant(prm)) j["constant_solutions"] = find_constant_solutions(prm);
            emit(cfg, dump(j));
        } else if (*c_lin) {
            check_basic(prm);
            json j{{"params", prm}};
            if (lin_order3) {
                j["equilibria"] = json::array({linearize_order3(prm)});
            } else if (!lin_point.empty()) {
                const auto v = parse_list(lin_point, 2, "--point");
                j["equilibria"] = json::array({linearize_planar(v, prm)});
            } else if (is_scale_invariant(prm)) {
                j["equilibria"] = planar_equilibria(prm);
            } else {
                j["equilibria"] = json::array({linearize_order3(prm)});
            }
            emit(cfg, dump(j));
        } else if (*c_int) {
            check_basic(prm);
            const auto s0 = parse_list(init, 0, "--init");
            IntegrateOptions o = integ_opts(cfg);
            if (cfg.chart == Chart::planar && is_scale_invariant(prm))
                for (const auto& e : planar_equilibria(prm)) o.equilibria.push_back(e.location);
            const Trajectory tr = integrate(cfg.chart, s0, cfg.t0, cfg.t1, prm, o);
            if (ends_with(cfg.out, ".csv")) {
                std::ostringstream os;
                write_trajectory_csv(os, tr);
                emit(cfg, os.str());
            } else {
                emit(cfg, dump(json(tr)));
            }
        } else if (*c_shoot) {
            check_basic(prm);
            const auto roots = find_constant_solutions(prm).roots;
            std::string a = from, b = to;
            if (a.empty() || b.empty()) {
                if (roots.size() == 2) {
                    a = a.empty() ? roots[0].label : a;
                    b = b.empty() ? roots[1].label : b;
                } else if (roots.size() == 1) {
                    a = a.empty() ? "origin" : a;
                    b = b.empty() ? roots[0].label : b;
                } else {
                    throw DomainError("no planar equilibrium besides the origin");
                }
            }
            ShootOptions so;
            so.integ = integ_opts(cfg);
            emit(cfg, dump(json(shoot_connection(pick_equilibrium(a, prm), pick_equilibrium(b, prm), prm, so))));
        } else if (*c_portrait) {
            const FieldGrid g = field_grid(prm, cfg.bbox, cfg.nx, cfg.ny);
            const std::string base = cfg.out.empty() ? "portrait" : cfg.out;
            const std::string csv = base + "_field.csv", curves = base + "_curves.json", script = base + "_plot.py";
            std::ostringstream os;
            write_field_csv(os, g);
            write_file_atomic(csv, os.str());
            json cj = g.samples.empty() ? json{{"case", nullptr}, {"curves", {{"L", json::array()}, {"C1", json::array()}, {"C4", json::array()}}}, {"equilibria", json::array()}}
                                        : json(g.map);
            cj["sign_check"] = sign_pattern_check(g);
            write_file_atomic(curves, dump(cj));
            std::ostringstream ps;
            write_plot_script(ps, std::filesystem::path(csv).filename().string(),
                              std::filesystem::path(curves).filename().string());
            write_file_atomic(script, ps.str());
            std::cout << dump(json{{"field_csv", csv}, {"curves_json", curves}, {"plot_script", script},
                                   {"samples", g.samples.size()}});
        } else if (*c_verify) {
            std::vector<int> ids;
            if (suite != "all")
                for (double v : parse_list(suite, 0, "--suite")) ids.push_back(static_cast<int>(v));
            const AcceptanceReport rep = run_acceptance(ids);
            print_report(std::cout, rep);
            if (!f.out.empty()) write_file_atomic(f.out, dump(json(rep)));
            return rep.all_pass ? 0 : 1;
        } else if (*c_bar) {
            check_basic(prm);
            BarrierParams bp;
            if (!bc.empty()) bp.c = parse_real(bc);
            if (!bA.empty()) bp.A = parse_real(bA);
            if (!bR.empty()) bp.R = parse_real(bR);
            if (!bd.empty()) bp.d = parse_real(bd);
            if (!bk.empty()) bp.k = parse_real(bk);
            CertifyOptions co;
            co.r_lo = r_lo;
            co.r_hi = r_hi;
            co.n_points = n_points;
            if (!(r_lo > 0.0) || !(r_hi > r_lo) || n_points < 2) throw UsageError("bad certificate grid");
            json arr = json::array();
            if (family == "all") {
                // families outside their window are listed with the reason
                for (BarrierFamily fam : {BarrierFamily::eikonal_sub, BarrierFamily::eikonal_sub_truncated,
                                          BarrierFamily::eikonal_super, BarrierFamily::riccati_sub,
                                          BarrierFamily::riccati_super, BarrierFamily::emden_sub,
                                          BarrierFamily::emden_super, BarrierFamily::weak_super}) {
                    try {
                        arr.push_back(json(barrier(fam, bp, prm, co)));
                    } catch (const DomainError& e) {
                        arr.push_back(json{{"family", fam}, {"skipped", e.what()}});
                    }
                }
            } else {
                BarrierFamily fam;
                try {
                    fam = barrier_family_from_string(family);
                } catch (const DomainError& e) {
                    throw UsageError(e.what());
                }
                arr.push_back(json(barrier(fam, bp, prm, co)));
            }
            emit(cfg, dump(json{{"params", prm}, {"barriers", arr}}));
        }
    } catch (const UsageError& e) {
        return fail(2, "usage", e.what());
    } catch (const DomainError& e) {
        return fail(3, "domain", e.what());
    } catch (const NumericalError& e) {
        return fail(4, "numerical", e.what());
    } catch (const std::exception& e) {
        return fail(4, "numerical", e.what());
    }
    return 0;
}
