#pragma once

#include <vector>

#include "oisac/channel.hpp"
#include "oisac/kernels.hpp"

namespace oisac {

/// Fraction of floor cells (grid_n x grid_n midpoints) whose superposed
/// intensity, collected over coverage_area with vertical sources, is >= rho_i.
double area_fraction(const Scenario& s, const RadiationPattern& pattern, double rho_i, int grid_n,
                     Exec exec = Exec::parallel);

/// Spatial variance of the superposed floor intensity (collected over pd_area).
double uniformity_mse(const Scenario& s, const RadiationPattern& pattern, int grid_n,
                      Exec exec = Exec::parallel);

enum class Theorem1Variant { literal, mu_variant };

struct Theorem1Layout {
    double eps = 0.0;
    std::vector<double> angles;
    bool in_room = true;
};

/// Closed-form layout: xi_m = 2 pi (m-1)/mu + pi/4 and
/// eps = sqrt((sqrt(2 A H^2 / (pi a rho)) - H^2) / tan^2(arg)), arg = pi/rho
/// (literal) or pi/mu. A is coverage_area, a the adjacency factor.
/// Throws InfeasibleThresholdError when the outer radicand is not positive.
Theorem1Layout theorem1_layout(const Scenario& s, double rho_i, int mu, Theorem1Variant variant,
                               double adjacency = 0.8);

struct SearchRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.01;
    bool include_hi = true;

    std::vector<double> values() const;
};

struct SurfacePoint {
    double eps = 0.0;
    double xi0 = 0.0;
    double value = 0.0;
};

struct GridSearchResult {
    double eps = 0.0;
    double xi0 = 0.0;
    double value = 0.0;
    std::vector<SurfacePoint> surface;  // eps-major
};

/// Exhaustive maximizer of area_fraction over uniform layouts
/// xi_m = xi0 + 2 pi m / mu. Ties go to the smaller eps, then smaller xi0.
GridSearchResult grid_search_layout(const Scenario& s, int mu, double rho_i, const SearchRange& eps,
                                    const SearchRange& xi0, int grid_n, Exec exec = Exec::parallel);

/// Minimizer of uniformity_mse over the same family, same tie rule.
GridSearchResult uniformity_search_layout(const Scenario& s, int mu, const SearchRange& eps,
                                          const SearchRange& xi0, int grid_n,
                                          Exec exec = Exec::parallel);

/// F(xi0) = sum_m -sqrt2 eps x sin(xi0 + 2 pi m/mu - pi/4) /
///          [eps^2 + H^2 + 2x^2 - 2 sqrt2 eps x sin(xi0 + 2 pi m/mu + pi/4)]^3.
double symmetry_function_F(double xi0, const Scenario& s, int mu, double eps, double x);

/// Center of odd symmetry of F: -2 pi / mu + pi / 4.
double symmetry_center(int mu);

/// Diagonal coordinate x where the closed-form layout's floor intensity at
/// (x, x) drops to rho_i; min(W, L)/4 when the diagonal does not cross it.
double critical_diagonal_x(const Scenario& s, double rho_i, int mu, double eps);

/// Distance between two layout phases modulo the symmetries of a uniform
/// mu-source ring in a square room: shifts by gcd(2 pi/mu, pi/2) and the
/// reflection xi -> -xi.
double phase_distance(double a, double b, int mu);

}  // namespace oisac
