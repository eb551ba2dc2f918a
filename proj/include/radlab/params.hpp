#pragma once

/// @file params.hpp
/// @brief Problem parameters, derived exponents, critical thresholds and the
/// regime classifier for -Δu + u^p - M|∇u|^q = 0.

#include <optional>
#include <string>
#include <vector>

namespace radlab {

/// Absolute tolerance used for every threshold comparison (q against 2p/(p+1), ...).
inline constexpr double kThresholdTol = 1e-12;

/// One equation instance.
struct ProblemParams {
    double N = 3.0;  ///< spatial dimension, real, >= 1
    double p = 2.0;  ///< absorption exponent, > 1
    double q = 1.5;  ///< gradient exponent, > 1
    double M = 1.0;  ///< gradient coefficient, any sign
};

/// Every exponent derived from (N, p, q). gamma and theta need q != p.
struct ExponentSet {
    double alpha = 0;
    double beta = 0;
    std::optional<double> gamma;
    double kappa = 0;
    std::optional<double> theta;
    double sigma = 0;
    double K = 0;
    double L = 0;
    double ell = 0;
};

ExponentSet compute_exponents(const ProblemParams& prm);

struct CriticalMasses {
    double m_star = 0;
    double m_tilde = 0;
    double theta_N = 0;
};

/// m*, m~ and theta_N. Requires N >= 3 and p >= N/(N-2).
CriticalMasses critical_masses(const ProblemParams& prm);

/// theta_N alone (N >= 3).
double theta_N(double N);

enum class Position { below, equal, above };
Position compare(double a, double b, double tol = kThresholdTol);
const char* to_string(Position p);

enum class PCritical { subcritical, critical, supercritical };
const char* to_string(PCritical p);

enum class MassPosition { below_m_star, at_m_star, between, at_m_tilde, above_m_tilde };
const char* to_string(MassPosition m);

enum class LawEnd { zero, infinity };
const char* to_string(LawEnd e);

/// Shape of a behaviour law. All shapes read u ~ C r^{-a} |ln r|^{-b};
/// log_only is a = 0, b = -1 and loglog is u ~ C ln|ln r|.
enum class LawTemplate { power, power_log, log_only, loglog };
const char* to_string(LawTemplate t);

struct AsymptoticLaw {
    LawEnd end = LawEnd::zero;
    LawTemplate shape = LawTemplate::power;
    double a = 0;
    double b = 0;
    std::optional<double> constant;  ///< present only when the constant is pinned
    std::string name;                ///< short law identifier, e.g. "eikonal"
};

struct RegimeReport {
    bool scale_invariant = false;
    PCritical p_vs_critical = PCritical::subcritical;
    Position q_vs_serrin = Position::below;    ///< q against N/(N-1)
    Position q_vs_scale = Position::below;     ///< q against 2p/(p+1)
    Position q_vs_harmonic = Position::below;  ///< q against (N-2)p/(N-1)
    std::optional<MassPosition> mass_position;
    /// For the scale invariant case: item of the constant-solution classification (1..5)
    /// and the expected number of positive constant solutions.
    std::optional<int> constant_solution_item;
    std::optional<int> expected_root_count;
    std::vector<AsymptoticLaw> laws_at_zero;
    std::vector<AsymptoticLaw> laws_at_infinity;
};

RegimeReport classify_regime(const ProblemParams& prm);

/// Throws DomainError unless p > 1, q > 1, N >= 1.
void check_basic(const ProblemParams& prm);

/// True when |q - 2p/(p+1)| <= kThresholdTol.
bool is_scale_invariant(const ProblemParams& prm);

}  // namespace radlab
