#include "oisac/kernels.hpp"

#include <cmath>

#include "oisac/error.hpp"

namespace oisac {

FloorGrid FloorGrid::of(const Scenario& s, int n, double z) {
    if (n < 1) throw DomainError("floor grid: n must be positive");
    FloorGrid g;
    g.nx = g.ny = n;
    g.x0 = -0.5 * s.room_w;
    g.y0 = -0.5 * s.room_l;
    g.dx = s.room_w / n;
    g.dy = s.room_l / n;
    g.z = z;
    return g;
}

std::vector<double> intensity_map(const Scenario& s, const RadiationPattern& pattern,
                                  const Aiming& aiming, const FloorGrid& grid, double area,
                                  Exec exec) {
    std::vector<double> out(grid.size());
    const auto oaps = s.oap_positions();
    const long long ny = grid.ny;
    auto row = [&](long long j) {
        for (int i = 0; i < grid.nx; ++i) {
            const Vec3 p(grid.x(i), grid.y(static_cast<int>(j)), grid.z);
            double sum = 0.0;
            for (const auto& src : oaps) sum += received_intensity(s, pattern, src, p, aiming, area);
            out[static_cast<std::size_t>(j) * grid.nx + i] = sum;
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < ny; ++j) row(j);
    } else {
        for (long long j = 0; j < ny; ++j) row(j);
    }
    return out;
}

namespace {

// Per-source squared x and y offsets plus height, and the cone cutoff on d^2.
struct Separable {
    std::vector<std::vector<double>> dx2;
    std::vector<std::vector<double>> dy2;
    double h2 = 0.0;
    double d2_max = 0.0;
    double scale = 0.0;
    double mode = 1.0;
    double h = 0.0;
};

Separable separable(const Scenario& s, const std::vector<Vec3>& oaps, const FloorGrid& grid,
                    double area) {
    Separable k;
    k.mode = lambert_mode(s.semi_angle);
    k.h = s.room_h - grid.z;
    k.h2 = k.h * k.h;
    const double c = std::max(std::cos(s.semi_angle), std::cos(s.fov));
    k.d2_max = k.h2 / (c * c);
    k.scale = (k.mode + 1.0) / (2.0 * kPi) * area;
    for (const auto& p : oaps) {
        std::vector<double> ax(static_cast<std::size_t>(grid.nx));
        std::vector<double> ay(static_cast<std::size_t>(grid.ny));
        for (int i = 0; i < grid.nx; ++i) ax[static_cast<std::size_t>(i)] = (grid.x(i) - p.x()) * (grid.x(i) - p.x());
        for (int j = 0; j < grid.ny; ++j) ay[static_cast<std::size_t>(j)] = (grid.y(j) - p.y()) * (grid.y(j) - p.y());
        k.dx2.push_back(std::move(ax));
        k.dy2.push_back(std::move(ay));
    }
    return k;
}

// Intensity of row j accumulated into acc (size nx).
void separable_row(const Separable& k, int j, int nx, double* acc) {
    for (int i = 0; i < nx; ++i) acc[i] = 0.0;
    const bool unit_mode = std::abs(k.mode - 1.0) < 1e-12;
    const double num = k.scale * (unit_mode ? k.h2 : std::pow(k.h, k.mode + 1.0));
    for (std::size_t m = 0; m < k.dx2.size(); ++m) {
        const double* ax = k.dx2[m].data();
        const double c = k.dy2[m][static_cast<std::size_t>(j)] + k.h2;
        if (unit_mode) {
#pragma omp simd
            for (int i = 0; i < nx; ++i) {
                const double d2 = ax[i] + c;
                acc[i] += d2 <= k.d2_max ? num / (d2 * d2) : 0.0;
            }
        } else {
            const double e = -0.5 * (k.mode + 3.0);
            for (int i = 0; i < nx; ++i) {
                const double d2 = ax[i] + c;
                acc[i] += d2 <= k.d2_max ? num * std::pow(d2, e) : 0.0;
            }
        }
    }
}

std::size_t count_layout(const Separable& k, const FloorGrid& grid, double rho,
                         std::vector<double>& acc) {
    std::size_t count = 0;
    for (int j = 0; j < grid.ny; ++j) {
        separable_row(k, j, grid.nx, acc.data());
        for (int i = 0; i < grid.nx; ++i) count += acc[static_cast<std::size_t>(i)] >= rho;
    }
    return count;
}

}  // namespace

std::vector<double> lambertian_map(const Scenario& s, const FloorGrid& grid, double area,
                                   Exec exec) {
    const Separable k = separable(s, s.oap_positions(), grid, area);
    std::vector<double> out(grid.size());
    const long long ny = grid.ny;
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < ny; ++j)
            separable_row(k, static_cast<int>(j), grid.nx, out.data() + j * grid.nx);
    } else {
        for (long long j = 0; j < ny; ++j)
            separable_row(k, static_cast<int>(j), grid.nx, out.data() + j * grid.nx);
    }
    return out;
}

std::size_t lambertian_count(const Scenario& s, const FloorGrid& grid, double area, double rho) {
    const Separable k = separable(s, s.oap_positions(), grid, area);
    std::vector<double> acc(static_cast<std::size_t>(grid.nx));
    return count_layout(k, grid, rho, acc);
}

std::vector<double> layout_fractions(const Scenario& s, int mu, const std::vector<double>& eps,
                                     const std::vector<double>& xi0, const FloorGrid& grid,
                                     double area, double rho, Exec exec) {
    const long long ne = static_cast<long long>(eps.size());
    const long long nxi = static_cast<long long>(xi0.size());
    const long long total = ne * nxi;
    std::vector<double> out(static_cast<std::size_t>(total));
    const double cells = static_cast<double>(grid.size());
    auto one = [&](long long idx, std::vector<double>& acc) {
        const double e = eps[static_cast<std::size_t>(idx / nxi)];
        const double x = xi0[static_cast<std::size_t>(idx % nxi)];
        const Scenario layout = s.with_layout(e, uniform_angles(mu, x));
        const Separable k = separable(layout, layout.oap_positions(), grid, area);
        out[static_cast<std::size_t>(idx)] = static_cast<double>(count_layout(k, grid, rho, acc)) / cells;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel
        {
            std::vector<double> acc(static_cast<std::size_t>(grid.nx));
#pragma omp for schedule(dynamic, 4)
            for (long long idx = 0; idx < total; ++idx) one(idx, acc);
        }
    } else {
        std::vector<double> acc(static_cast<std::size_t>(grid.nx));
        for (long long idx = 0; idx < total; ++idx) one(idx, acc);
    }
    return out;
}

}  // namespace oisac
