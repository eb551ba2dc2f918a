#include "radlab/params.hpp"

#include <cmath>

#include "radlab/equilibria.hpp"
#include "radlab/errors.hpp"

namespace radlab {

void check_basic(const ProblemParams& prm) {
    if (!(prm.p > 1.0) || !(prm.q > 1.0) || !(prm.N >= 1.0) || !std::isfinite(prm.M))
        throw DomainError("parameters require p > 1, q > 1, N >= 1 and finite M");
}

Position compare(double a, double b, double tol) {
    if (std::abs(a - b) <= tol) return Position::equal;
    return a < b ? Position::below : Position::above;
}

bool is_scale_invariant(const ProblemParams& prm) {
    return compare(prm.q, 2.0 * prm.p / (prm.p + 1.0)) == Position::equal;
}

ExponentSet compute_exponents(const ProblemParams& prm) {
    check_basic(prm);
    const double N = prm.N, p = prm.p, q = prm.q;
    ExponentSet e;
    e.alpha = 2.0 / (p - 1.0);
    e.beta = (2.0 - q) / (q - 1.0);
    e.kappa = ((N - 1.0) * q - N) / (q - 1.0);
    e.sigma = (p + 1.0) * q - 2.0 * p;
    e.K = N - 2.0 - e.alpha;
    e.L = e.K - e.alpha;
    e.ell = e.alpha * e.K;
    if (q != p) {
        e.gamma = q / (p - q);
        e.theta = ((N - 1.0) * q - (N - 2.0) * p) / (p - q);
    }
    if (is_scale_invariant(prm)) {
        // the three exponents coincide exactly on this line
        e.sigma = 0.0;
        e.beta = e.alpha;
        if (e.gamma) e.gamma = e.alpha;
    }
    return e;
}

double theta_N(double N) {
    if (N < 3.0) throw DomainError("theta_N requires N >= 3");
    return (N - 1.0) / (N - 2.0) * std::pow((N - 1.0) / N, N / (2.0 * (N - 1.0)));
}

CriticalMasses critical_masses(const ProblemParams& prm) {
    check_basic(prm);
    const double N = prm.N, p = prm.p;
    if (N < 3.0) throw DomainError("critical masses require N >= 3");
    const double pc = N / (N - 2.0);
    if (compare(p, pc) == Position::below)
        throw DomainError("critical masses require p >= N/(N-2)");
    CriticalMasses c;
    const double base = std::max(0.0, ((N - 2.0) * p - N) / (2.0 * p));
    c.m_star = (p + 1.0) * std::pow(base, p / (p + 1.0));
    const double base2 = ((N - 2.0) * p * p - (N + 2.0)) / (4.0 * p * p);
    c.m_tilde = 0.5 * (p + 1.0) * (p + 1.0) * std::pow(std::max(0.0, base2), p / (p + 1.0));
    c.theta_N = theta_N(N);
    return c;
}

const char* to_string(Position p) {
    switch (p) {
        case Position::below: return "below";
        case Position::equal: return "equal";
        case Position::above: return "above";
    }
    return "?";
}

const char* to_string(PCritical p) {
    switch (p) {
        case PCritical::subcritical: return "subcritical";
        case PCritical::critical: return "critical";
        case PCritical::supercritical: return "supercritical";
    }
    return "?";
}

const char* to_string(MassPosition m) {
    switch (m) {
        case MassPosition::below_m_star: return "below_m_star";
        case MassPosition::at_m_star: return "at_m_star";
        case MassPosition::between: return "between_m_star_and_m_tilde";
        case MassPosition::at_m_tilde: return "at_m_tilde";
        case MassPosition::above_m_tilde: return "above_m_tilde";
    }
    return "?";
}

const char* to_string(LawEnd e) { return e == LawEnd::zero ? "zero" : "infinity"; }

const char* to_string(LawTemplate t) {
    switch (t) {
        case LawTemplate::power: return "power";
        case LawTemplate::power_log: return "power_log";
        case LawTemplate::log_only: return "log_only";
        case LawTemplate::loglog: return "loglog";
    }
    return "?";
}

namespace {

AsymptoticLaw power_law(LawEnd end, double a, std::optional<double> c, std::string name) {
    return {end, LawTemplate::power, a, 0.0, c, std::move(name)};
}

AsymptoticLaw log_law(LawEnd end, std::optional<double> c, std::string name) {
    return {end, LawTemplate::log_only, 0.0, -1.0, c, std::move(name)};
}

// u ~ k r^{2-N} for N >= 3, u ~ k |ln r| for N = 2
AsymptoticLaw weak_law(LawEnd end, double N, std::string name) {
    if (compare(N, 2.0) == Position::equal) return log_law(end, std::nullopt, std::move(name));
    return power_law(end, N - 2.0, std::nullopt, std::move(name));
}

// u ~ C r^{2-N} |ln r|^{1-N}: integrating the Riccati balance
// -(r^{N-1}u')' = M r^{N-1}|u'|^{N/(N-1)} gives C = ((N-1)/M)^{N-1}/(N-2)
AsymptoticLaw critical_log_law(double N, double M, std::string name) {
    const double c = std::pow((N - 1.0) / M, N - 1.0) / (N - 2.0);
    return {LawEnd::zero, LawTemplate::power_log, N - 2.0, N - 1.0, c, std::move(name)};
}

void scale_invariant_catalog(const ProblemParams& prm, const ExponentSet& e, RegimeReport& r) {
    const double N = prm.N, M = prm.M;
    const ConstantSolutionSet roots = find_constant_solutions(prm);
    for (const auto& rt : roots.roots) {
        r.laws_at_zero.push_back(power_law(LawEnd::zero, e.alpha, rt.x, "self_similar_" + rt.label));
        r.laws_at_infinity.push_back(
            power_law(LawEnd::infinity, e.alpha, rt.x, "self_similar_" + rt.label));
    }
    if (M <= 0.0) return;
    switch (r.p_vs_critical) {
        case PCritical::subcritical:
            if (N >= 2.0) r.laws_at_zero.push_back(weak_law(LawEnd::zero, N, "weak_singularity"));
            break;
        case PCritical::critical:
            r.laws_at_zero.push_back(critical_log_law(N, M, "critical_log"));
            r.laws_at_infinity.push_back({LawEnd::infinity, LawTemplate::power_log, N - 2.0,
                                          0.5 * (N - 2.0),
                                          std::pow((N - 2.0) / std::sqrt(2.0), N - 2.0),
                                          "emden_log"});
            break;
        case PCritical::supercritical:
            r.laws_at_infinity.push_back(weak_law(LawEnd::infinity, N, "weak_decay"));
            break;
    }
}

void eikonal_side_catalog(const ProblemParams& prm, const ExponentSet& e, const FixedPoints& fp,
                          RegimeReport& r) {
    // 2p/(p+1) < q < p: eikonal at 0, Emden type at infinity
    const double N = prm.N, q = prm.q, M = prm.M;
    r.laws_at_zero.push_back(power_law(LawEnd::zero, *e.gamma, fp.X_M, "eikonal"));
    if (compare(q, 2.0) != Position::above && N >= 2.0) {
        const bool n2 = compare(N, 2.0) == Position::equal;
        if (r.q_vs_serrin == Position::above && compare(q, 2.0) == Position::below) {
            r.laws_at_zero.push_back(power_law(LawEnd::zero, e.beta, fp.xi_M, "riccati"));
        } else if (compare(q, 2.0) == Position::equal) {
            if (n2)
                r.laws_at_zero.push_back(
                    {LawEnd::zero, LawTemplate::loglog, 0.0, 0.0, 1.0 / M, "riccati_loglog"});
            else
                r.laws_at_zero.push_back(log_law(LawEnd::zero, (N - 2.0) / M, "riccati_log"));
        } else if (r.q_vs_serrin == Position::below) {
            r.laws_at_zero.push_back(weak_law(LawEnd::zero, N, "weak_singularity"));
        } else {
            if (n2)
                r.laws_at_zero.push_back(log_law(LawEnd::zero, std::nullopt, "weak_singularity"));
            else
                r.laws_at_zero.push_back(critical_log_law(N, M, "riccati_critical_log"));
        }
    }
    switch (r.p_vs_critical) {
        case PCritical::subcritical:
            r.laws_at_infinity.push_back(power_law(LawEnd::infinity, e.alpha, fp.x_0, "emden"));
            break;
        case PCritical::critical:
            r.laws_at_infinity.push_back({LawEnd::infinity, LawTemplate::power_log, N - 2.0,
                                          0.5 * (N - 2.0),
                                          std::pow((N - 2.0) / std::sqrt(2.0), N - 2.0),
                                          "emden_log"});
            break;
        case PCritical::supercritical:
            r.laws_at_infinity.push_back(weak_law(LawEnd::infinity, N, "weak_decay"));
            break;
    }
}

void emden_side_catalog(const ProblemParams& prm, const ExponentSet& e, const FixedPoints& fp,
                        RegimeReport& r) {
    // 1 < q < 2p/(p+1): Emden type at 0, eikonal/Riccati at infinity
    const double N = prm.N;
    if (r.p_vs_critical == PCritical::subcritical) {
        r.laws_at_zero.push_back(power_law(LawEnd::zero, e.alpha, fp.x_0, "emden"));
        if (N >= 2.0) r.laws_at_zero.push_back(weak_law(LawEnd::zero, N, "weak_singularity"));
    }
    if (N >= 2.0) {
        r.laws_at_infinity.push_back(power_law(LawEnd::infinity, *e.gamma, fp.X_M, "eikonal"));
        if (r.q_vs_serrin == Position::above) {
            r.laws_at_infinity.push_back(power_law(LawEnd::infinity, e.beta, fp.xi_M, "riccati"));
            r.laws_at_infinity.push_back(power_law(LawEnd::infinity, N - 2.0, std::nullopt, "weak_decay"));
        }
    } else {
        r.laws_at_infinity.push_back(power_law(LawEnd::infinity, *e.gamma, fp.X_M, "eikonal"));
    }
}

}  // namespace

RegimeReport classify_regime(const ProblemParams& prm) {
    const ExponentSet e = compute_exponents(prm);
    const double N = prm.N, p = prm.p, q = prm.q, M = prm.M;
    RegimeReport r;
    r.scale_invariant = is_scale_invariant(prm);
    if (N <= 2.0 + kThresholdTol) {
        r.p_vs_critical = PCritical::subcritical;
    } else {
        switch (compare(p, N / (N - 2.0))) {
            case Position::below: r.p_vs_critical = PCritical::subcritical; break;
            case Position::equal: r.p_vs_critical = PCritical::critical; break;
            case Position::above: r.p_vs_critical = PCritical::supercritical; break;
        }
    }
    r.q_vs_serrin = N > 1.0 ? compare(q, N / (N - 1.0)) : Position::above;
    r.q_vs_scale = compare(q, 2.0 * p / (p + 1.0));
    r.q_vs_harmonic = N > 1.0 ? compare(q, (N - 2.0) * p / (N - 1.0)) : Position::above;

    if (r.scale_invariant) {
        const bool super = r.p_vs_critical == PCritical::supercritical;
        if (M <= 0.0) {
            r.constant_solution_item = 1;
            r.expected_root_count = r.p_vs_critical == PCritical::subcritical ? 1 : 0;
        } else if (!super) {
            r.constant_solution_item = 2;
            r.expected_root_count = 1;
        } else {
            const CriticalMasses cm = critical_masses(prm);
            const Position ms = compare(M, cm.m_star, kThresholdTol * std::max(1.0, cm.m_star));
            const Position mt = compare(M, cm.m_tilde, kThresholdTol * std::max(1.0, cm.m_tilde));
            if (ms == Position::below) {
                r.mass_position = MassPosition::below_m_star;
                r.constant_solution_item = 4;
                r.expected_root_count = 0;
            } else if (ms == Position::equal) {
                r.mass_position = MassPosition::at_m_star;
                r.constant_solution_item = 3;
                r.expected_root_count = 1;
            } else {
                r.mass_position = mt == Position::below   ? MassPosition::between
                                  : mt == Position::equal ? MassPosition::at_m_tilde
                                                          : MassPosition::above_m_tilde;
                r.constant_solution_item = 5;
                r.expected_root_count = 2;
            }
        }
        scale_invariant_catalog(prm, e, r);
        return r;
    }

    if (M <= 0.0 || !e.gamma) return r;
    const FixedPoints fp = fixed_points(prm);
    if (r.q_vs_scale == Position::above) {
        if (q < p) eikonal_side_catalog(prm, e, fp, r);
    } else {
        emden_side_catalog(prm, e, fp, r);
    }
    return r;
}

}  // namespace radlab
