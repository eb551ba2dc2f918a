#pragma once

/// @file equilibria.hpp
/// @brief Constant spherical solutions, chart fixed points, linearizations and
/// the bifurcation non-resonance check.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "radlab/params.hpp"

namespace radlab {

/// P_M(x) = x^{p-1} - M alpha^{2p/(p+1)} x^{(p-1)/(p+1)} + ell.
double eval_pm(double x, const ProblemParams& prm);
/// Derivative of P_M with respect to x.
double eval_pm_derivative(double x, const ProblemParams& prm);
/// P~(z) = z^{p+1} - M alpha^{2p/(p+1)} z + ell, with z = x^{(p-1)/(p+1)}.
double eval_pm_tilde(double z, const ProblemParams& prm);

struct ConstantRoot {
    double x = 0;
    int multiplicity = 1;
    std::string label;  ///< x_0, x_M, x_1M, x_2M or x_mstar
};

struct ConstantSolutionSet {
    std::vector<ConstantRoot> roots;  ///< increasing order
};

/// Positive roots of P_M (requires q = 2p/(p+1)).
ConstantSolutionSet find_constant_solutions(const ProblemParams& prm);

/// Named constants of the non scale invariant charts; each is absent when
/// its precondition fails.
struct FixedPoints {
    std::optional<double> X_M;    ///< eikonal constant (q < p, M > 0)
    std::optional<double> eta_M;  ///< Riccati slope constant (N/(N-1) < q < 2, M > 0)
    std::optional<double> xi_M;   ///< Riccati constant eta_M / beta
    std::optional<double> x_0;    ///< Emden constant (K != 0)
};

FixedPoints fixed_points(const ProblemParams& prm);

enum class Stability {
    saddle,
    node_source,
    node_sink,
    focus_source,
    focus_sink,
    center,
    degenerate,
    non_hyperbolic
};
const char* to_string(Stability s);

using Matrix = std::vector<std::vector<double>>;

struct EquilibriumReport {
    std::string chart;
    std::vector<double> location;
    Matrix jacobian;
    std::vector<std::complex<double>> eigenvalues;
    /// Real eigenvectors, one per real eigenvalue, scaled so the first
    /// nonzero component is 1. Empty entries for complex eigenvalues.
    std::vector<std::vector<double>> eigenvectors;
    Stability stability = Stability::degenerate;
    /// Planar case: characteristic polynomial X^2 + c1 X + c0 as {1, c1, c0}.
    std::vector<double> char_poly;
    bool degenerate_spectrum = false;
    double residual = 0;  ///< vector-field norm at the location
    /// Order-3 case: closed-form eigenvalues (mu1, mu2, mu3).
    std::vector<double> closed_form_eigenvalues;
    /// Order-3 case: printed alternative for the second component of u1 and
    /// whether it agrees with the computed eigenvector.
    std::optional<double> printed_b;
    std::optional<bool> printed_b_agrees;
};

/// Linearization of the scale invariant planar system at (0,0) or (x, alpha x).
EquilibriumReport linearize_planar(const std::vector<double>& point, const ProblemParams& prm,
                                   double tol_eq = 1e-9);

/// Linearization of the desingularized order-3 system at (0, xi_M^{q-1}, beta).
EquilibriumReport linearize_order3(const ProblemParams& prm);

struct BifurcationEntry {
    int k = 0;
    std::string root_label;
    double root = 0;
    double value = 0;  ///< lambda_k + x P_M'(x)
    bool nonresonant = true;
};

/// Non-resonance lambda_k + x P_M'(x) != 0 for k = 1..k_max at both roots.
std::vector<BifurcationEntry> bifurcation_check(const ProblemParams& prm, int k_max);

/// Real eigen-decomposition helper shared with other modules.
void eigen_decompose(const Matrix& J, std::vector<std::complex<double>>& values,
                     std::vector<std::vector<double>>& vectors);

}  // namespace radlab
