#include "oisac/optics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oisac/error.hpp"
#include "oisac/kernels.hpp"

namespace oisac {

namespace {

constexpr double kFwhmToSigma = 0.42466090014400953;  // 1 / (2 sqrt(2 ln 2))

template <class F>
double integrate(F f, double a, double b, double rel_tol, const char* who) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    // Integrate over [0, 1]: the error estimate misbehaves on nanometre-wide intervals.
    const double w = b - a;
    auto unit = [&](double u) { return f(a + w * u) * w; };
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(unit, 0.0, 1.0, 15, rel_tol, &err, &l1);
    if (err > std::max(1e-5 * l1, 1e-14)) throw QuadratureError(std::string(who) + ": quadrature did not converge");
    return v;
}

// Largest x in [a, b] with pred(x) true, given pred(a) true and pred monotone.
template <class P>
double bisect_edge(P pred, double a, double b) {
    for (int i = 0; i < 200 && std::abs(b - a) > 1e-18; ++i) {
        const double m = 0.5 * (a + b);
        (pred(m) ? a : b) = m;
    }
    return a;
}

}  // namespace

Spectrum Spectrum::gaussian(double peak, double fwhm, double support_fwhm) {
    if (!(peak > 0.0 && fwhm > 0.0 && support_fwhm > 0.0))
        throw DomainError("spectrum: peak, fwhm and support must be positive");
    Spectrum s;
    s.peak_ = peak;
    s.sigma_ = fwhm * kFwhmToSigma;
    s.lo_ = peak - support_fwhm * fwhm;
    s.hi_ = peak + support_fwhm * fwhm;
    if (!(s.lo_ > 0.0)) throw DomainError("spectrum: support reaches non-positive wavelengths");
    s.norm_ = 1.0;
    s.norm_ = s.cdf(s.hi_) - s.cdf(s.lo_);
    return s;
}

Spectrum Spectrum::monochromatic(double peak) {
    if (!(peak > 0.0)) throw DomainError("spectrum: peak must be positive");
    Spectrum s;
    s.peak_ = s.lo_ = s.hi_ = peak;
    return s;
}

double Spectrum::cdf(double lambda) const {
    return 0.5 * std::erfc(-(lambda - peak_) / (sigma_ * std::sqrt(2.0))) / norm_;
}

double Spectrum::density(double lambda) const {
    if (monochromatic() || lambda < lo_ || lambda > hi_) return 0.0;
    const double z = (lambda - peak_) / sigma_;
    return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * kPi) * norm_);
}

double Spectrum::mass(double a, double b) const {
    if (monochromatic()) return (a <= peak_ && peak_ <= b) ? 1.0 : 0.0;
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    if (!(b > a)) return 0.0;
    return cdf(b) - cdf(a);
}

Dispersion Dispersion::inverse(double n0, double lambda0) {
    if (!(n0 > 1.0 && lambda0 > 0.0)) throw DomainError("dispersion: need n0 > 1 and lambda0 > 0");
    Dispersion d;
    d.a_ = n0;
    d.lambda0_ = lambda0;
    return d;
}

Dispersion Dispersion::cauchy(double a, double b, double lambda0) {
    if (!(a > 1.0 && b >= 0.0 && lambda0 > 0.0)) throw DomainError("dispersion: need a > 1, b >= 0");
    Dispersion d;
    d.cauchy_ = true;
    d.a_ = a;
    d.b_ = b;
    d.lambda0_ = lambda0;
    return d;
}

double Dispersion::index(double lambda) const {
    if (cauchy_) return a_ + b_ / (lambda * lambda);
    return a_ * lambda0_ / lambda;
}

Vec2 snell_refract(const Vec2& d, const Vec2& normal, double n_in, double n_out) {
    if (!(n_in > 0.0 && n_out > 0.0)) throw DomainError("snell: indices must be positive");
    Vec2 n = normal.normalized();
    double c = n.dot(d);
    if (c < 0.0) {
        n = -n;
        c = -c;
    }
    const double eta = n_in / n_out;
    const double sin2_t = eta * eta * (1.0 - c * c);
    if (sin2_t > 1.0) throw TotalInternalReflectionError("snell: total internal reflection");
    const double cos_t = std::sqrt(1.0 - sin2_t);
    return eta * d + (cos_t - eta * c) * n;
}

Vec2 lemma1_normal(double phi, double n0) {
    if (!(n0 > 1.0)) throw DomainError("lens normal: n0 must exceed 1");
    return Vec2(n0 * std::sin(phi), n0 * std::cos(phi) - 1.0).normalized();
}

double lens_capture(double semi_angle, double n0) {
    if (!(n0 > 1.0)) throw DomainError("lens capture: n0 must exceed 1");
    return std::min(semi_angle, std::acos(1.0 / n0));
}

double trace_exact_aod(double phi, double lambda, const Dispersion& dispersion) {
    const double n0 = dispersion.n0();
    if (!(std::abs(phi) < std::acos(1.0 / n0)))
        throw DomainError("trace: AoE outside the lens domain");
    const Vec2 d(std::sin(phi), std::cos(phi));
    const Vec2 t = snell_refract(d, lemma1_normal(phi, n0), dispersion.index(lambda), 1.0);
    return std::atan2(t.x(), t.y());
}

double lemma2_aod_approx(double phi, double lambda, const Dispersion& dispersion, AodForm form) {
    const double l0 = dispersion.lambda0();
    if (form == AodForm::lemma) {
        const double n = dispersion.index(lambda);
        return n / (n - 1.0) * (lambda - l0) / lambda * phi;
    }
    const double n0 = dispersion.n0();
    return n0 * (lambda - l0) / ((n0 - 1.0) * lambda) * phi;
}

double compression(double lambda, double n0, double lambda0) {
    return n0 / (n0 - 1.0) * (1.0 - lambda0 / lambda);
}

double theorem2_density(double phi, const Spectrum& spectrum, const Dispersion& dispersion,
                        double semi_angle) {
    const double m0 = lambert_mode(semi_angle);
    const double l0 = dispersion.lambda0();
    auto src = [&](double aoe) { return (m0 + 1.0) / (2.0 * kPi) * std::pow(std::cos(aoe), m0); };
    phi = std::abs(phi);
    if (phi == 0.0) return src(0.0);
    if (spectrum.monochromatic()) return 0.0;
    auto g = [&](double lambda) {
        const double n = dispersion.index(lambda);
        return (n - 1.0) * lambda / (n * (lambda - l0));
    };
    auto inside = [&](double lambda) { return std::abs(g(lambda)) * phi <= semi_angle; };
    auto f = [&](double lambda) {
        const double aoe = g(lambda) * phi;
        return std::abs(aoe) > semi_angle ? 0.0 : src(aoe) * spectrum.density(lambda);
    };
    double sum = 0.0;
    const double lo = spectrum.lo();
    const double hi = spectrum.hi();
    if (lo < l0 && inside(lo)) sum += integrate(f, lo, bisect_edge(inside, lo, l0), 1e-9, "theorem2");
    if (hi > l0 && inside(hi)) sum += integrate(f, bisect_edge(inside, hi, l0), hi, 1e-9, "theorem2");
    return sum;
}

BeamformedPattern::BeamformedPattern(const Spectrum& spectrum, double n0, double semi_angle,
                                     int table_size)
    : spectrum_(spectrum),
      n0_(n0),
      mode_(lambert_mode(semi_angle)),
      semi_angle_(semi_angle),
      capture_(lens_capture(semi_angle, n0)) {
    if (table_size < 16) throw DomainError("beamformed pattern: table too small");
    const double log_max = std::log(kPi / 2);
    log_min_ = std::log(theta_min_);
    std::vector<double> x(static_cast<std::size_t>(table_size));
    std::vector<double> y(x.size());
    std::vector<double> dy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = i + 1 == x.size() ? log_max
                                 : log_min_ + (log_max - log_min_) * static_cast<double>(i) / (table_size - 1);
        const double theta = std::exp(x[i]);
        const auto [p, dp] = spectral_exact(theta);
        y[i] = p;
        dy[i] = dp * theta;
    }
    s_min_ = y.front();
    table_ = std::make_unique<boost::math::interpolators::cubic_hermite<std::vector<double>>>(
        std::move(x), std::move(y), std::move(dy));
}

double BeamformedPattern::lambert_cone(double t) const {
    const double h = std::sin(0.5 * t);
    return -std::expm1((mode_ + 1.0) * std::log1p(-2.0 * h * h));
}

double BeamformedPattern::lambert_cone_slope(double t) const {
    return (mode_ + 1.0) * std::pow(std::cos(t), mode_) * std::sin(t);
}

std::pair<double, double> BeamformedPattern::spectral_exact(double theta) const {
    const double full = lambert_cone(capture_);
    if (spectrum_.monochromatic()) return {full, 0.0};
    const double l0 = spectrum_.peak();
    const double k = (n0_ - 1.0) * theta / (n0_ * capture_);
    // |c(lambda)| <= theta / capture on [l0/(1+k), l0/(1-k)]: those rays stay collimated inside theta.
    const double a = l0 / (1.0 + k);
    const double b = k < 1.0 ? l0 / (1.0 - k) : spectrum_.hi() + 1.0;
    const double lo = spectrum_.lo();
    const double hi = spectrum_.hi();
    // Integrands take the offset d = lambda - l0; c is formed from d directly
    // because lambda itself cannot resolve the tiny offsets near small theta.
    const double g = n0_ / (n0_ - 1.0);
    auto fp = [&](double d) {
        const double c = std::abs(g * d / (l0 + d));
        return spectrum_.density(l0 + d) * lambert_cone(theta / c);
    };
    auto fd = [&](double d) {
        const double c = std::abs(g * d / (l0 + d));
        return spectrum_.density(l0 + d) * lambert_cone_slope(theta / c) / c;
    };
    // Both integrands peak at the inner edges, on a scale ~theta * l0; integrate
    // in s = log|d| so small theta stays resolvable.
    auto side = [&](auto f, double near, double far, double sign) {
        auto h = [&](double s) {
            const double e = std::exp(s);
            return f(sign * e) * e;
        };
        return integrate(h, std::log(near), std::log(far), 1e-11, "beamformed");
    };
    double p = full * spectrum_.mass(a, b);
    double dp = 0.0;
    if (a > lo) {
        p += side(fp, l0 * k / (1.0 + k), l0 - lo, -1.0);
        dp += side(fd, l0 * k / (1.0 + k), l0 - lo, -1.0);
    }
    if (b < hi) {
        p += side(fp, l0 * k / (1.0 - k), hi - l0, 1.0);
        dp += side(fd, l0 * k / (1.0 - k), hi - l0, 1.0);
    }
    return {p, dp};
}

double BeamformedPattern::spectral_power(double theta) const {
    if (theta <= 0.0) return 0.0;
    if (spectrum_.monochromatic()) return lambert_cone(capture_);
    if (theta < theta_min_) return s_min_ * theta / theta_min_;
    if (theta >= kPi / 2) return (*table_)(std::log(kPi / 2));
    return (*table_)(std::log(theta));
}

double BeamformedPattern::spectral_slope(double theta) const {
    if (spectrum_.monochromatic() || theta >= kPi / 2) return 0.0;
    if (theta < theta_min_) return s_min_ / theta_min_;
    return table_->prime(std::log(theta)) / theta;
}

double BeamformedPattern::uncollimated(double theta) const {
    return lambert_cone(std::clamp(theta, capture_, semi_angle_)) - lambert_cone(capture_);
}

double BeamformedPattern::uncollimated_slope(double theta) const {
    return (theta > capture_ && theta < semi_angle_) ? lambert_cone_slope(theta) : 0.0;
}

double BeamformedPattern::cone_power(double theta) const {
    return spectral_power(theta) + uncollimated(theta);
}

double BeamformedPattern::cone_power_slope(double theta) const {
    return spectral_slope(theta) + uncollimated_slope(theta);
}

double BeamformedPattern::density(double phi) const {
    phi = std::abs(phi);
    if (phi <= 0.0 || phi >= kPi / 2) return 0.0;
    return std::max(0.0, cone_power_slope(phi)) / (2.0 * kPi * std::sin(phi));
}

double BeamformedPattern::averaged_density(double phi, double aperture) const {
    phi = std::abs(phi);
    if (!(aperture > 0.0) || phi > 50.0 * aperture) return density(phi);
    const double lo = std::max(0.0, phi - aperture);
    const double hi = phi + aperture;
    const double solid = 4.0 * kPi * std::sin(0.5 * (hi + lo)) * std::sin(0.5 * (hi - lo));
    return std::max(0.0, cone_power(hi) - cone_power(lo)) / solid;
}

double intensity_concentration(const Scenario& s, const RadiationPattern& pattern,
                               const Vec3& center, double size, const Aiming& aiming,
                               int grid_n) {
    if (!(size > 0.0)) return 0.0;
    const FloorGrid grid = FloorGrid::of(s, grid_n, center.z());
    const double cell = grid.dx * grid.dy;
    const auto map = intensity_map(s, pattern, aiming, grid, cell, Exec::parallel);
    double total = 0.0;
    double inside = 0.0;
    const double half = 0.5 * size;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double v = map[static_cast<std::size_t>(j) * grid.nx + i];
            total += v;
            if (std::abs(grid.x(i) - center.x()) < half && std::abs(grid.y(j) - center.y()) < half)
                inside += v;
        }
    }
    return total > 0.0 ? inside / total : 0.0;
}

}  // namespace oisac
