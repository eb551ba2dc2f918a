#include "radlab/portrait.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fmt/format.h>

#include "radlab/charts.hpp"
#include "radlab/errors.hpp"

namespace radlab {

namespace {

constexpr double kLabelTol = 1e-12;

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    auto r = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(52));
    return 0.5 * (r.first + r.second);
}

// sign of a - b, zero when within tol times the larger magnitude (at least 1)
int tsign(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a - b) <= kLabelTol * scale) return 0;
    return a > b ? 1 : -1;
}

// zero of Phi on y > 0 (0 when K <= 0)
double phi_zero(const ProblemParams& prm, double K) {
    const double q = 2.0 * prm.p / (prm.p + 1.0);
    return K > 0.0 ? std::pow(K / prm.M, 1.0 / (q - 1.0)) : 0.0;
}

std::vector<double> log_spaced(double a, double b, std::size_t n) {
    std::vector<double> v;
    if (n == 0 || !(b > a) || !(a > 0.0)) return v;
    if (n == 1) return {a};
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i) v.push_back(std::exp(la + (lb - la) * double(i) / double(n - 1)));
    return v;
}

std::string py_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\\' || c == '\'') out += '\\';
        out += c;
    }
    return out + "'";
}

bool inside(const Point& pt, const BBox& b) {
    return pt[0] >= b.x_min && pt[0] <= b.x_max && pt[1] >= b.y_min && pt[1] <= b.y_max;
}

}  // namespace

const char* to_string(PortraitCase c) {
    switch (c) {
        case PortraitCase::I: return "I";
        case PortraitCase::II: return "II";
        case PortraitCase::III: return "III";
        case PortraitCase::IV: return "IV";
    }
    return "?";
}

const char* to_string(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::B_tilde: return "B~";
        case Region::C: return "C";
        case Region::D: return "D";
        case Region::E: return "E";
        case Region::F: return "F";
        case Region::on_L: return "on_L";
        case Region::on_C1: return "on_C1";
        case Region::on_C4: return "on_C4";
        case Region::on_axis: return "on_axis";
        case Region::outside: return "outside";
    }
    return "?";
}

double portrait_phi(double y, const ProblemParams& prm) {
    const double q = 2.0 * prm.p / (prm.p + 1.0);
    return prm.M * std::pow(y, q) - compute_exponents(prm).K * y;
}

double portrait_psi(double y, const ProblemParams& prm) {
    const double q = 2.0 * prm.p / (prm.p + 1.0);
    return prm.M * std::pow(std::abs(y), q) - compute_exponents(prm).K * y;
}

double portrait_phi_inverse(double x, const ProblemParams& prm) {
    const double K = compute_exponents(prm).K;
    const double xp = std::pow(x, prm.p);
    const double lo = phi_zero(prm, K);
    if (xp == 0.0) return lo;
    double hi = std::max(1.0, 2.0 * lo);
    while (portrait_phi(hi, prm) < xp) hi *= 2.0;
    return bisect([&](double y) { return portrait_phi(y, prm) - xp; }, lo, hi);
}

Point planar_field(const Point& pt, const ProblemParams& prm) {
    const State h = chart_rhs(Chart::planar, 0.0, {pt[0], pt[1]}, prm);
    return {h[0], h[1]};
}

RegionMap vanishing_curves(const ProblemParams& prm, const BBox& bbox, std::size_t n_points) {
    check_basic(prm);
    if (!is_scale_invariant(prm)) throw DomainError("portrait needs q = 2p/(p+1)");
    if (!(prm.M > 0.0)) throw DomainError("portrait cases need M > 0");
    if (bbox.empty() || !(bbox.x_max > 0.0)) throw DomainError("bounding box does not meet x > 0");
    const ExponentSet e = compute_exponents(prm);
    const double p = prm.p, q = 2.0 * p / (p + 1.0), M = prm.M, alpha = e.alpha, K = e.K;

    RegionMap map;
    map.params = prm;
    map.alpha = alpha;
    map.K = K;
    map.bbox = bbox;
    if (compare(K, 0.0) != Position::above) {
        map.pcase = PortraitCase::I;
    } else {
        const double ms = critical_masses(prm).m_star;
        map.m_star = ms;
        switch (compare(M, ms, kThresholdTol * std::max(1.0, ms))) {
            case Position::above: map.pcase = PortraitCase::II; break;
            case Position::equal: map.pcase = PortraitCase::III; break;
            case Position::below: map.pcase = PortraitCase::IV; break;
        }
    }

    // C1 ∩ L: zeros of h(x) = Phi(alpha x)/x - x^{p-1}, increasing then decreasing around x_c
    auto h = [&](double x) { return M * std::pow(alpha, q) * std::pow(x, q - 1.0) - K * alpha - std::pow(x, p - 1.0); };
    const double x_c = std::pow((q - 1.0) * M * std::pow(alpha, q) / (p - 1.0), 1.0 / (p - q));
    auto grow = [&](double lo) {
        double hi = std::max(1.0, 2.0 * lo);
        while (h(hi) >= 0.0) hi *= 2.0;
        return hi;
    };
    std::vector<double> xs;
    switch (map.pcase) {
        case PortraitCase::I: xs.push_back(bisect(h, x_c, grow(x_c))); break;
        case PortraitCase::II:
            xs.push_back(bisect(h, 0.0, x_c));
            xs.push_back(bisect(h, x_c, grow(x_c)));
            break;
        case PortraitCase::III: xs.push_back(x_c); break;
        case PortraitCase::IV: break;
    }
    for (double x : xs) map.intersections.push_back({x, alpha * x});
    map.split_x = xs;

    // L
    const double x_lo = std::max(bbox.x_min, 0.0);
    if (n_points > 0) {
        for (std::size_t i = 0; i < n_points; ++i) {
            const double x = x_lo + (bbox.x_max - x_lo) * (n_points == 1 ? 0.0 : double(i) / double(n_points - 1));
            const Point pt{x, alpha * x};
            if (x > 0.0 && inside(pt, bbox)) map.L.push_back(pt);
        }
    }
    // C1 on y > y0 where Phi > 0, log-spaced in y - y0
    if (bbox.y_max > 0.0) {
        const double y0 = phi_zero(prm, K);
        const double top = bbox.y_max - y0;
        if (top > 0.0) {
            for (double d : log_spaced(top * 1e-8, top, n_points)) {
                const double y = y0 + d;
                const Point pt{std::pow(portrait_phi(y, prm), 1.0 / p), y};
                if (inside(pt, bbox)) map.C1.push_back(pt);
            }
        }
    }
    // C4 on y < 0 where Psi > 0
    if (bbox.y_min < 0.0) {
        const double y4 = K < 0.0 ? std::pow(-K / M, 1.0 / (q - 1.0)) : 0.0;  // |y| where Psi turns positive
        const double top = -bbox.y_min - y4;
        if (top > 0.0) {
            for (double d : log_spaced(top * 1e-8, top, n_points)) {
                const double y = -(y4 + d);
                const Point pt{std::pow(portrait_psi(y, prm), 1.0 / p), y};
                if (inside(pt, bbox)) map.C4.push_back(pt);
            }
        }
    }
    return map;
}

Region region_label(const Point& pt, const RegionMap& map) {
    const ProblemParams& prm = map.params;
    const double x = pt[0], y = pt[1];
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(y)) return Region::outside;
    const double xp = std::pow(x, prm.p);
    if (tsign(y, 0.0) == 0) return Region::on_axis;
    if (y < 0.0) {
        const int s = tsign(xp, portrait_psi(y, prm));
        if (s == 0) return Region::on_C4;
        return s > 0 ? Region::C : Region::E;
    }
    const int sl = tsign(y, map.alpha * x);          // above L when > 0
    const int sc = tsign(portrait_phi(y, prm), xp);  // above C1 when > 0
    if (sl == 0) return Region::on_L;
    if (sc == 0) return Region::on_C1;
    if (sl > 0 && sc > 0) return Region::A;
    if (sl < 0 && sc < 0) return Region::C;
    if (sl < 0 && sc > 0) return Region::D;
    // between L and C1 with L below
    switch (map.pcase) {
        case PortraitCase::I: return Region::B;
        case PortraitCase::IV: return Region::B_tilde;
        case PortraitCase::II:
        case PortraitCase::III: return x <= map.split_x.front() ? Region::F : Region::B;
    }
    return Region::outside;
}

std::optional<std::array<int, 2>> region_sign_pattern(Region r) {
    switch (r) {
        case Region::A: return std::array<int, 2>{-1, 1};
        case Region::B:
        case Region::B_tilde:
        case Region::F: return std::array<int, 2>{-1, -1};
        case Region::C: return std::array<int, 2>{1, -1};
        case Region::D:
        case Region::E: return std::array<int, 2>{1, 1};
        default: return std::nullopt;
    }
}

FieldGrid field_grid(const ProblemParams& prm, const BBox& bbox, std::size_t nx, std::size_t ny,
                     std::size_t curve_points) {
    FieldGrid g;
    if (bbox.empty() || !(bbox.x_max > 0.0) || nx == 0 || ny == 0) return g;
    g.map = vanishing_curves(prm, bbox, curve_points);
    g.nx = nx;
    g.ny = ny;
    auto at = [](double a, double b, std::size_t i, std::size_t n) {
        return n == 1 ? 0.5 * (a + b) : a + (b - a) * double(i) / double(n - 1);
    };
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            FieldSample s;
            s.x = at(bbox.x_min, bbox.x_max, i, nx);
            s.y = at(bbox.y_min, bbox.y_max, j, ny);
            if (!(s.x > 0.0)) continue;
            const Point H = planar_field({s.x, s.y}, prm);
            s.H1 = H[0];
            s.H2 = H[1];
            s.region = region_label({s.x, s.y}, g.map);
            g.samples.push_back(s);
        }
    }
    return g;
}

SignCheck sign_pattern_check(const FieldGrid& g) {
    SignCheck c;
    for (const auto& s : g.samples) {
        const auto pat = region_sign_pattern(s.region);
        if (!pat) continue;
        ++c.checked;
        const bool ok = (s.H1 > 0.0 ? 1 : (s.H1 < 0.0 ? -1 : 0)) == (*pat)[0] &&
                        (s.H2 > 0.0 ? 1 : (s.H2 < 0.0 ? -1 : 0)) == (*pat)[1];
        if (!ok) {
            ++c.failures;
            if (!c.first_failure) c.first_failure = s;
        }
    }
    c.pass = c.failures == 0;
    return c;
}

void write_field_csv(std::ostream& os, const FieldGrid& g) {
    os << "x,y,H1,H2,region\n";
    for (const auto& s : g.samples)
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{}\n", s.x, s.y, s.H1, s.H2, to_string(s.region));
}

void write_plot_script(std::ostream& os, const std::string& csv_path, const std::string& curves_path) {
    os << "import csv, json\n"
          "import matplotlib.pyplot as plt\n\n"
       << "CSV = " << py_quote(csv_path) << "\nCURVES = " << py_quote(curves_path) << "\n\n"
       << "rows = list(csv.DictReader(open(CSV)))\n"
          "x = [float(r['x']) for r in rows]\n"
          "y = [float(r['y']) for r in rows]\n"
          "u = [float(r['H1']) for r in rows]\n"
          "v = [float(r['H2']) for r in rows]\n"
          "n = [max((a * a + b * b) ** 0.5, 1e-300) for a, b in zip(u, v)]\n"
          "fig, ax = plt.subplots(figsize=(7, 6))\n"
          "ax.quiver(x, y, [a / m for a, m in zip(u, n)], [b / m for b, m in zip(v, n)], angles='xy', width=0.002)\n"
          "data = json.load(open(CURVES))\n"
          "for name in ('L', 'C1', 'C4'):\n"
          "    pts = data['curves'][name]\n"
          "    if pts:\n"
          "        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=name)\n"
          "for p in data['equilibria']:\n"
          "    ax.plot(p[0], p[1], 'ko')\n"
          "ax.axhline(0.0, color='gray', lw=0.5)\n"
          "ax.set_xlabel('x')\n"
          "ax.set_ylabel('y')\n"
          "ax.set_title('case ' + data['case'])\n"
          "ax.legend()\n"
          "fig.savefig(CSV.rsplit('.', 1)[0] + '.png', dpi=150)\n";
}

}  // namespace radlab
