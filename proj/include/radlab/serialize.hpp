#pragma once

/// @file serialize.hpp
/// @brief JSON conversions for every reported type. Doubles are written in
/// shortest round-trip form, so parsing an emitted document restores the
/// same values bit for bit.

#include <complex>
#include <optional>
#include <string>

#include <json.hpp>

#include "radlab/acceptance.hpp"
#include "radlab/asymptotics.hpp"
#include "radlab/charts.hpp"
#include "radlab/closed_forms.hpp"
#include "radlab/equilibria.hpp"
#include "radlab/orbits.hpp"
#include "radlab/params.hpp"
#include "radlab/portrait.hpp"

NLOHMANN_JSON_NAMESPACE_BEGIN
template <typename T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json& j, const std::optional<T>& v) {
        if (v)
            j = *v;
        else
            j = nullptr;
    }
    static void from_json(const json& j, std::optional<T>& v) {
        if (j.is_null())
            v.reset();
        else
            v = j.get<T>();
    }
};

template <>
struct adl_serializer<std::complex<double>> {
    static void to_json(json& j, const std::complex<double>& z) { j = json::array({z.real(), z.imag()}); }
    static void from_json(const json& j, std::complex<double>& z) {
        z = {j.at(0).get<double>(), j.at(1).get<double>()};
    }
};
NLOHMANN_JSON_NAMESPACE_END

namespace radlab {

using json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(Position, {{Position::below, "below"}, {Position::equal, "equal"}, {Position::above, "above"}})
NLOHMANN_JSON_SERIALIZE_ENUM(PCritical, {{PCritical::subcritical, "subcritical"},
                                         {PCritical::critical, "critical"},
                                         {PCritical::supercritical, "supercritical"}})
NLOHMANN_JSON_SERIALIZE_ENUM(MassPosition, {{MassPosition::below_m_star, "below_m_star"},
                                            {MassPosition::at_m_star, "at_m_star"},
                                            {MassPosition::between, "between"},
                                            {MassPosition::at_m_tilde, "at_m_tilde"},
                                            {MassPosition::above_m_tilde, "above_m_tilde"}})
NLOHMANN_JSON_SERIALIZE_ENUM(LawEnd, {{LawEnd::zero, "zero"}, {LawEnd::infinity, "infinity"}})
NLOHMANN_JSON_SERIALIZE_ENUM(LawTemplate, {{LawTemplate::power, "power"},
                                           {LawTemplate::power_log, "power_log"},
                                           {LawTemplate::log_only, "log_only"},
                                           {LawTemplate::loglog, "loglog"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Chart, {{Chart::planar, "planar"},
                                     {Chart::emden, "emden"},
                                     {Chart::riccati, "riccati"},
                                     {Chart::eikonal, "eikonal"},
                                     {Chart::order3, "order3"},
                                     {Chart::order3_desing, "order3_desing"}})
NLOHMANN_JSON_SERIALIZE_ENUM(EventKind, {{EventKind::reached_t_end, "reached_t_end"},
                                         {EventKind::converged_to_equilibrium, "converged_to_equilibrium"},
                                         {EventKind::blow_up, "blow_up"},
                                         {EventKind::x_axis_crossing, "x_axis_crossing"},
                                         {EventKind::left_domain, "left_domain"},
                                         {EventKind::integration_failure, "integration_failure"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Stability, {{Stability::saddle, "saddle"},
                                         {Stability::node_source, "node_source"},
                                         {Stability::node_sink, "node_sink"},
                                         {Stability::focus_source, "focus_source"},
                                         {Stability::focus_sink, "focus_sink"},
                                         {Stability::center, "center"},
                                         {Stability::degenerate, "degenerate"},
                                         {Stability::non_hyperbolic, "non_hyperbolic"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Operator, {{Operator::full, "full"},
                                        {Operator::riccati, "riccati"},
                                        {Operator::eikonal, "eikonal"},
                                        {Operator::emden, "emden"}})
NLOHMANN_JSON_SERIALIZE_ENUM(BarrierFamily, {{BarrierFamily::eikonal_sub, "eikonal_sub"},
                                             {BarrierFamily::eikonal_sub_truncated, "eikonal_sub_truncated"},
                                             {BarrierFamily::eikonal_super, "eikonal_super"},
                                             {BarrierFamily::riccati_sub, "riccati_sub"},
                                             {BarrierFamily::riccati_super, "riccati_super"},
                                             {BarrierFamily::emden_sub, "emden_sub"},
                                             {BarrierFamily::emden_super, "emden_super"},
                                             {BarrierFamily::weak_super, "weak_super"}})
NLOHMANN_JSON_SERIALIZE_ENUM(PortraitCase, {{PortraitCase::I, "I"},
                                            {PortraitCase::II, "II"},
                                            {PortraitCase::III, "III"},
                                            {PortraitCase::IV, "IV"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Region, {{Region::A, "A"},
                                      {Region::B, "B"},
                                      {Region::B_tilde, "B~"},
                                      {Region::C, "C"},
                                      {Region::D, "D"},
                                      {Region::E, "E"},
                                      {Region::F, "F"},
                                      {Region::on_L, "on_L"},
                                      {Region::on_C1, "on_C1"},
                                      {Region::on_C4, "on_C4"},
                                      {Region::on_axis, "on_axis"},
                                      {Region::outside, "outside"}})

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ProblemParams, N, p, q, M)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ExponentSet, alpha, beta, gamma, kappa, theta, sigma, K, L, ell)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CriticalMasses, m_star, m_tilde, theta_N)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AsymptoticLaw, end, shape, a, b, constant, name)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RegimeReport, scale_invariant, p_vs_critical, q_vs_serrin, q_vs_scale,
                                                q_vs_harmonic, mass_position, constant_solution_item,
                                                expected_root_count, laws_at_zero, laws_at_infinity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ConstantRoot, x, multiplicity, label)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ConstantSolutionSet, roots)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FixedPoints, X_M, eta_M, xi_M, x_0)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EquilibriumReport, chart, location, jacobian, eigenvalues, eigenvectors,
                                                stability, char_poly, degenerate_spectrum, residual,
                                                closed_form_eigenvalues, printed_b, printed_b_agrees)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BifurcationEntry, k, root_label, root, value, nonresonant)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Event, kind, t, state, point, detail)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Trajectory, chart, t, states, event, params)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Connection, angle, closest_approach, bisection_iterations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ShootResult, success, status, source, target, trajectory, shot,
                                                confirmation, terminal_distance, closest_approach,
                                                bisection_iterations, angle, angle_mismatch, connections)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RadialProfile, r, u, du, blowup_radius, event)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Diagnostics, t, E, S, C2, monotone, worst_increase)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EigenRateResult, ell, residual, window_points)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BarrierParams, c, A, R, d, k)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Certificate, certified, claimed, r_lo, r_hi, n_points, slack, worst,
                                                violating_r)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RiccatiWindow, mu1, mu2, mu3, lo, hi, valid)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Sandwich, ordered, min_gap, violating_r)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FitResult, shape, a, b, constant, exponent_residual, slope_r,
                                                slope_logr, log_exponent_residual, window_lo, window_hi, n_points)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LawFit, law, fit, matched, constant_error)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Classification, classified, law, candidates)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ExpansionResult, fitted, predicted, predicted_q2, rel_error, sign,
                                                sign_matches, t_lo, t_hi, n_points, bisections)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BBox, x_min, x_max, y_min, y_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SignCheck, pass, checked, failures)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CriterionResult, id, name, pass, detail, metrics)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AcceptanceReport, criteria, all_pass)

// ShootResult.seconds and CriterionResult.seconds stay out of the JSON so reruns are byte-identical.
// Types holding callables serialize their data only; the callable is empty after parsing.
// Barrier interval ends that are infinite are written as null.
void to_json(json& j, const Barrier& b);
void from_json(const json& j, Barrier& b);
void to_json(json& j, const HardyResult& h);
void from_json(const json& j, HardyResult& h);
/// Curves JSON: case, curves {L, C1, C4}, equilibria (C1 ∩ L), split_x, params, bbox.
void to_json(json& j, const RegionMap& m);
void from_json(const json& j, RegionMap& m);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace radlab
