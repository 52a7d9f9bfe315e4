#pragma once

#include <cstddef>
#include <vector>

#include "oisac/channel.hpp"
#include "oisac/geometry.hpp"

namespace oisac {

/// Execution policy for the grid kernels. Both policies produce
/// bit-identical results; `serial` is the reference.
enum class Exec { serial, parallel };

/// Midpoint grid over the W x L floor (or a plane at height z), row-major
/// with x fastest.
struct FloorGrid {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double z = 0.0;

    static FloorGrid of(const Scenario& s, int n, double z = 0.0);
    double x(int i) const { return x0 + (i + 0.5) * dx; }
    double y(int j) const { return y0 + (j + 0.5) * dy; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

/// Superposed intensity at every grid cell, any pattern and aiming.
std::vector<double> intensity_map(const Scenario& s, const RadiationPattern& pattern,
                                  const Aiming& aiming, const FloorGrid& grid, double area,
                                  Exec exec);

/// Same quantity for vertical Lambertian sources, evaluated with separable
/// per-axis squared distances. Agrees with intensity_map to rounding.
std::vector<double> lambertian_map(const Scenario& s, const FloorGrid& grid, double area,
                                   Exec exec);

/// Cells of a vertical Lambertian layout with intensity >= rho.
std::size_t lambertian_count(const Scenario& s, const FloorGrid& grid, double area, double rho);

/// Covered-area fraction of every uniform layout (eps[i], xi0[j]) with mu
/// sources; result is eps-major, size eps.size() * xi0.size().
std::vector<double> layout_fractions(const Scenario& s, int mu, const std::vector<double>& eps,
                                     const std::vector<double>& xi0, const FloorGrid& grid,
                                     double area, double rho, Exec exec);

}  // namespace oisac
