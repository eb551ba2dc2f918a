#pragma once

/// @file closed_forms.hpp
/// @brief Explicit radial solutions, barrier families with sampled sign
/// certificates and the finite-difference residual oracle.

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "radlab/params.hpp"

namespace radlab {

/// Which operator a profile is meant to solve.
///  full     -u'' - (N-1)u'/r + u^p - M|u'|^q
///  riccati  -u'' - (N-1)u'/r - M|u'|^q
///  eikonal  u^p - M|u'|^q
///  emden    -u'' - (N-1)u'/r + u^p
enum class Operator { full, riccati, eikonal, emden };
const char* to_string(Operator o);

/// Radial profile r -> (u, u') on [r_min, r_max].
struct Profile {
    std::function<std::pair<double, double>(double)> eval;
    double r_min = 0;
    double r_max = 0;
    std::string label;
    ProblemParams params;
    Operator op = Operator::full;
};

/// u = x_root r^{-alpha}. Requires q = 2p/(p+1) and P_M(x_root) = 0.
Profile selfsimilar(double x_root, const ProblemParams& prm);

/// Harmonic profile C r^{2-N} with u^p = M|u'|^q. Requires q = (N-2)p/(N-1).
Profile eikonal_harmonic(const ProblemParams& prm);
/// Constant C of eikonal_harmonic, (M (N-2)^q)^{(N-1)/p}.
double eikonal_harmonic_constant(const ProblemParams& prm);

/// ((N-2) M^{(N-1)/N})^{N-2} r^{2-N} for p = N/(N-2), q = N/(N-1).
Profile critical_explicit(const ProblemParams& prm);

struct RiccatiOptions {
    double r_ref = 0;   ///< anchor radius when u(inf) = 0 is unavailable; 0 selects a default
    double u_ref = 1;   ///< anchor value
    double quad_tol = 1e-13;
};

/// Decreasing solution of -Δu = M|∇u|^q with
/// r^{N-1}|u'| = (C + (M/kappa) r^{N-(N-1)q})^{-1/(q-1)} (kappa != 0) or
/// (C - (q-1) M ln r)^{-1/(q-1)} (kappa = 0).
Profile riccati_profile(double C, const ProblemParams& prm, const RiccatiOptions& opts = {});

struct ExteriorProfile {
    Profile profile;
    double predicted_limit = 0;  ///< 1/((N-2) C^{1/(q-1)})
    double fitted_limit = 0;     ///< tail extrapolation of r^{N-2} w
};

/// w(r) = int_r^inf s^{1-N}(C + (M/kappa) s^{N-(N-1)q})^{-1/(q-1)} ds, N >= 3, q > N/(N-1), C > 0.
ExteriorProfile exterior_newton_profile(double C, const ProblemParams& prm);

/// n log-spaced radii on [a, b].
std::vector<double> log_grid(double a, double b, std::size_t n);

struct OracleOptions {
    double rel_step = 1e-4;  ///< h = r * rel_step
};

/// Signed residual of the profile's operator at r, divided by
/// max(u^p, M|u'|^q, 1) over the terms the operator contains.
double normalized_residual(const Profile& prof, double r, const OracleOptions& opts = {});

/// max |normalized residual| over the grid. Throws DomainError when a stencil
/// leaves [r_min, r_max].
double residual_oracle(const Profile& prof, const std::vector<double>& r_grid,
                       const OracleOptions& opts = {});

/// Writes r,u,du,residual rows.
void write_profile_csv(std::ostream& os, const Profile& prof, const std::vector<double>& r_grid);

enum class BarrierFamily {
    eikonal_sub,            ///< c r^{-gamma}, theta > 0, c <= X_M
    eikonal_sub_truncated,  ///< c_m (r^{-gamma} - r1^{-gamma})_+, theta < 0 < sigma
    eikonal_super,          ///< c r^{-gamma} + A
    riccati_sub,            ///< xi_M (1 - A r^d)_+ r^{-beta}
    riccati_super,          ///< xi_M r^{-beta}
    emden_sub,              ///< x_0 r^{-alpha}
    emden_super,            ///< C r^{-alpha} + A
    weak_super              ///< k r^{2-N} + k^q r^{2-(N-1)q} + a
};
const char* to_string(BarrierFamily f);
BarrierFamily barrier_family_from_string(const std::string& s);
bool is_subsolution_family(BarrierFamily f);

/// Optional family parameters; unset entries take the family default.
struct BarrierParams {
    std::optional<double> c;  ///< eikonal amplitude
    std::optional<double> A;  ///< additive shift or Riccati cut-off amplitude
    std::optional<double> R;  ///< eikonal super radius
    std::optional<double> d;  ///< Riccati exponent
    std::optional<double> k;  ///< weak singularity amplitude
};

struct CertifyOptions {
    double r_lo = 1e-3;
    double r_hi = 1e3;
    std::size_t n_points = 1000;
    double slack = 1e-10;
    OracleOptions oracle;
};

struct Certificate {
    bool certified = false;
    std::string claimed;  ///< "subsolution" or "supersolution"
    double r_lo = 0, r_hi = 0;
    std::size_t n_points = 0;
    double slack = 0;
    double worst = 0;  ///< largest normalized violation of the claimed sign (<= 0 when clean)
    std::optional<double> violating_r;
};

struct Barrier {
    BarrierFamily family = BarrierFamily::eikonal_sub;
    Profile profile;
    Certificate certificate;
    std::map<std::string, double> constants;  ///< resolved family constants
};

/// Builds a barrier in its window and certifies the residual sign on a log grid.
/// Throws DomainError on a window violation; a failed certificate is reported, not thrown.
Barrier barrier(BarrierFamily family, const BarrierParams& bp, const ProblemParams& prm,
                const CertifyOptions& opts = {});

/// Samples the sign of the profile's residual against the claimed sign.
Certificate certify(const Profile& prof, bool subsolution, const CertifyOptions& opts);

struct RiccatiWindow {
    double mu1 = 0, mu2 = 0, mu3 = 0;
    double lo = 0, hi = 0;  ///< admissible d in (lo, hi]
    bool valid = false;
};

/// Roots of -d^2 + ((q-1)kappa + beta) d - (q-1)kappa beta and the admissible
/// exponent window (min root, min(max root, mu1)).
RiccatiWindow riccati_window(const ProblemParams& prm);

struct Sandwich {
    bool ordered = false;
    double min_gap = 0;  ///< min over the grid of super - sub
    std::optional<double> violating_r;
};

/// sub <= super pointwise on the grid.
Sandwich sandwich_check(const Profile& sub, const Profile& super, const std::vector<double>& r_grid);

}  // namespace radlab
