#pragma once

/// @file portrait.hpp
/// @brief Vanishing curves and regions of the planar field
/// H(x, y) = (alpha x - y, -K y - x^p + M|y|^{2p/(p+1)}) and sampled field export.

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "radlab/params.hpp"

namespace radlab {

struct BBox {
    double x_min = 0, x_max = 1, y_min = -1, y_max = 1;
    bool empty() const { return !(x_max > x_min) || !(y_max > y_min); }
};

/// Configuration of the vanishing curves.
///  I   K <= 0, M > 0
///  II  K > 0, M > m*
///  III K > 0, M = m*
///  IV  K > 0, 0 < M < m*
enum class PortraitCase { I, II, III, IV };
const char* to_string(PortraitCase c);

/// Region tags; the boundary tags mark points on a vanishing curve or the x axis.
enum class Region { A, B, B_tilde, C, D, E, F, on_L, on_C1, on_C4, on_axis, outside };
const char* to_string(Region r);

using Point = std::array<double, 2>;

struct RegionMap {
    PortraitCase pcase = PortraitCase::I;
    ProblemParams params;
    double alpha = 0, K = 0;
    std::optional<double> m_star;
    BBox bbox;
    std::vector<Point> L, C1, C4;  ///< curve samples inside the box
    /// C1 ∩ L by bisection on y = alpha x, increasing x; a tangency counts once.
    std::vector<Point> intersections;
    /// Roots of P_M bracketing the (B)/(F) split: x_M (case I), x_1M and x_2M (II), x_m* (III).
    std::vector<double> split_x;
};

/// Phi(y) = M y^{2p/(p+1)} - K y (y > 0), Psi(y) = M|y|^{2p/(p+1)} - K y (y < 0).
double portrait_phi(double y, const ProblemParams& prm);
double portrait_psi(double y, const ProblemParams& prm);
/// The y > 0 with Phi(y) = x^p, Phi being increasing where positive.
double portrait_phi_inverse(double x, const ProblemParams& prm);
/// H at a point, from the planar chart.
Point planar_field(const Point& pt, const ProblemParams& prm);

/// Requires q = 2p/(p+1) and M > 0. Throws DomainError when the box misses x > 0.
RegionMap vanishing_curves(const ProblemParams& prm, const BBox& bbox, std::size_t n_points);

/// Region of a point from the defining inequalities (tolerance 1e-12, scaled by the terms compared).
Region region_label(const Point& pt, const RegionMap& map);

/// Expected signs of (H1, H2) in an open region; nullopt for boundary tags.
std::optional<std::array<int, 2>> region_sign_pattern(Region r);

struct FieldSample {
    double x = 0, y = 0, H1 = 0, H2 = 0;
    Region region = Region::outside;
};

struct FieldGrid {
    RegionMap map;
    std::vector<FieldSample> samples;  ///< row-major in y, then x
    std::size_t nx = 0, ny = 0;
};

/// Samples H on an nx by ny grid of the box (x > 0 only). An empty box gives an empty grid.
FieldGrid field_grid(const ProblemParams& prm, const BBox& bbox, std::size_t nx, std::size_t ny,
                     std::size_t curve_points = 400);

struct SignCheck {
    bool pass = true;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::optional<FieldSample> first_failure;
};

/// Compares every interior sample's field signs with its region's pattern.
SignCheck sign_pattern_check(const FieldGrid& g);

/// CSV columns x,y,H1,H2,region.
void write_field_csv(std::ostream& os, const FieldGrid& g);
/// Plain-text matplotlib script reading the CSV and the curves JSON.
void write_plot_script(std::ostream& os, const std::string& csv_path, const std::string& curves_path);

}  // namespace radlab
