#include "oisac/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oisac/error.hpp"

namespace oisac {

namespace {

bool vertical_lambertian(const RadiationPattern& p) {
    return p.kind() == RadiationPattern::Kind::lambertian;
}

std::vector<double> floor_map(const Scenario& s, const RadiationPattern& pattern, int grid_n,
                              double area, Exec exec) {
    if (grid_n < 1) throw DomainError("layout: grid_n must be positive");
    const FloorGrid grid = FloorGrid::of(s, grid_n, 0.0);
    if (vertical_lambertian(pattern)) return lambertian_map(s, grid, area, exec);
    return intensity_map(s, pattern, Aiming::vertical(), grid, area, exec);
}

// Lexicographic best over an eps-major surface: larger (or smaller) value,
// then smaller eps, then smaller xi0, which is index order.
GridSearchResult pick(const std::vector<double>& e, const std::vector<double>& x,
                      const std::vector<double>& v, bool maximize) {
    GridSearchResult r;
    r.surface.reserve(v.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        r.surface.push_back({e[i / x.size()], x[i % x.size()], v[i]});
        if (maximize ? v[i] > v[best] : v[i] < v[best]) best = i;
    }
    if (!v.empty()) {
        r.eps = e[best / x.size()];
        r.xi0 = x[best % x.size()];
        r.value = v[best];
    }
    return r;
}

}  // namespace

double area_fraction(const Scenario& s, const RadiationPattern& pattern, double rho_i, int grid_n,
                     Exec exec) {
    const auto map = floor_map(s, pattern, grid_n, s.coverage_area, exec);
    const auto hit = std::count_if(map.begin(), map.end(), [rho_i](double v) { return v >= rho_i; });
    return static_cast<double>(hit) / static_cast<double>(map.size());
}

double uniformity_mse(const Scenario& s, const RadiationPattern& pattern, int grid_n, Exec exec) {
    const auto map = floor_map(s, pattern, grid_n, s.pd_area, exec);
    const double n = static_cast<double>(map.size());
    const double mean = std::accumulate(map.begin(), map.end(), 0.0) / n;
    double acc = 0.0;
    for (double v : map) acc += (v - mean) * (v - mean);
    return acc / n;
}

Theorem1Layout theorem1_layout(const Scenario& s, double rho_i, int mu, Theorem1Variant variant,
                               double adjacency) {
    if (mu < 1) throw DomainError("theorem1: mu must be >= 1");
    if (!(rho_i > 0.0 && adjacency > 0.0)) throw DomainError("theorem1: rho_i and adjacency must be positive");
    const double h2 = s.room_h * s.room_h;
    const double inner = std::sqrt(2.0 * s.coverage_area * h2 / (kPi * adjacency * rho_i)) - h2;
    if (!(inner > 0.0))
        throw InfeasibleThresholdError("theorem1: threshold unreachable for this room height and aperture");
    const double arg = variant == Theorem1Variant::literal ? kPi / rho_i : kPi / mu;
    const double t = std::tan(arg);
    Theorem1Layout out;
    out.eps = std::sqrt(inner / (t * t));
    for (int m = 0; m < mu; ++m) out.angles.push_back(wrap_angle(2.0 * kPi * m / mu + kPi / 4.0));
    out.in_room = out.eps <= std::min(s.room_w, s.room_l);
    return out;
}

std::vector<double> SearchRange::values() const {
    if (!(step > 0.0) || hi < lo) throw DomainError("search range: need step > 0 and hi >= lo");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (include_hi ? v > hi + 1e-9 * step : v >= hi - 1e-9 * step) break;
        out.push_back(v);
    }
    return out;
}

GridSearchResult grid_search_layout(const Scenario& s, int mu, double rho_i, const SearchRange& eps,
                                    const SearchRange& xi0, int grid_n, Exec exec) {
    if (mu < 1) throw DomainError("grid search: mu must be >= 1");
    const auto e = eps.values();
    const auto x = xi0.values();
    const FloorGrid grid = FloorGrid::of(s, grid_n, 0.0);
    const auto v = layout_fractions(s, mu, e, x, grid, s.coverage_area, rho_i, exec);
    return pick(e, x, v, true);
}

GridSearchResult uniformity_search_layout(const Scenario& s, int mu, const SearchRange& eps,
                                          const SearchRange& xi0, int grid_n, Exec exec) {
    const auto e = eps.values();
    const auto x = xi0.values();
    std::vector<double> v(e.size() * x.size());
    const RadiationPattern lambert = RadiationPattern::lambertian(s.semi_angle);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Scenario layout = s.with_layout(e[i / x.size()], uniform_angles(mu, x[i % x.size()]));
        v[i] = uniformity_mse(layout, lambert, grid_n, exec);
    }
    return pick(e, x, v, false);
}

double symmetry_function_F(double xi0, const Scenario& s, int mu, double eps, double x) {
    const double h2 = s.room_h * s.room_h;
    const double r2 = std::sqrt(2.0);
    double sum = 0.0;
    for (int m = 1; m <= mu; ++m) {
        const double a = xi0 + 2.0 * kPi * m / mu;
        const double num = -r2 * eps * std::sin(a - kPi / 4.0) * x;
        const double den = eps * eps + h2 + 2.0 * x * x - 2.0 * r2 * eps * std::sin(a + kPi / 4.0) * x;
        sum += num / (den * den * den);
    }
    return sum;
}

double symmetry_center(int mu) { return -2.0 * kPi / mu + kPi / 4.0; }

double critical_diagonal_x(const Scenario& s, double rho_i, int mu, double eps) {
    const Scenario layout = s.with_layout(eps, uniform_angles(mu, kPi / 4.0));
    const RadiationPattern lambert = RadiationPattern::lambertian(s.semi_angle);
    auto excess = [&](double x) {
        return superposed_intensity(layout, lambert, Vec3(x, x, 0.0), Aiming::vertical(),
                                    s.coverage_area) - rho_i;
    };
    double lo = 0.0;
    double hi = 0.5 * std::min(s.room_w, s.room_l);
    if (!(excess(lo) >= 0.0 && excess(hi) < 0.0)) return 0.25 * std::min(s.room_w, s.room_l);
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double phase_distance(double a, double b, int mu) {
    // gcd(2 pi / mu, pi / 2) = 2 pi / lcm(mu, 4).
    const int l = std::lcm(mu, 4);
    const double period = 2.0 * kPi / l;
    auto mod_dist = [period](double d) {
        const double r = std::fmod(std::abs(d), period);
        return std::min(r, period - r);
    };
    return std::min(mod_dist(a - b), mod_dist(a + b));
}

}  // namespace oisac
