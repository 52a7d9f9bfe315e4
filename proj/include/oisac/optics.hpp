#pragma once

#include <memory>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>

#include "oisac/channel.hpp"
#include "oisac/geometry.hpp"

namespace oisac {

/// LED emission spectrum chi(lambda), normalized on its support. Wavelengths in meters.
class Spectrum {
public:
    /// Gaussian peaked at `peak` with the given FWHM, truncated to
    /// peak +- support_fwhm * FWHM and renormalized.
    static Spectrum gaussian(double peak, double fwhm, double support_fwhm = 3.0);
    static Spectrum monochromatic(double peak);

    double peak() const { return peak_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool monochromatic() const { return sigma_ == 0.0; }

    double density(double lambda) const;
    /// Probability mass on [a, b] intersected with the support.
    double mass(double a, double b) const;

private:
    double cdf(double lambda) const;

    double peak_ = 450e-9;
    double sigma_ = 0.0;
    double lo_ = 450e-9;
    double hi_ = 450e-9;
    double norm_ = 1.0;
};

/// Refractive index n(lambda) of the lens material.
class Dispersion {
public:
    /// n(lambda) = n0 * lambda0 / lambda.
    static Dispersion inverse(double n0, double lambda0);
    /// n(lambda) = a + b / lambda^2, with lambda0 kept as the design wavelength.
    static Dispersion cauchy(double a, double b, double lambda0);

    double index(double lambda) const;
    double lambda0() const { return lambda0_; }
    double n0() const { return index(lambda0_); }

private:
    bool cauchy_ = false;
    double a_ = 1.4;
    double b_ = 0.0;
    double lambda0_ = 450e-9;
};

/// Vector-form Snell refraction of unit direction `d` at a surface with unit
/// normal `normal` (either orientation). Throws TotalInternalReflectionError.
Vec2 snell_refract(const Vec2& d, const Vec2& normal, double n_in, double n_out);

/// Surface normal that sends a ray emitted at AoE phi (inside glass of index
/// n0) out along the axis: normalize(n0 sin phi, n0 cos phi - 1).
Vec2 lemma1_normal(double phi, double n0);

/// Largest AoE a single collimating surface of index n0 can bend back onto
/// the axis, capped by the LED semi-angle: min(semi_angle, acos(1/n0)).
double lens_capture(double semi_angle, double n0);

/// AoD of wavelength `lambda` emitted at AoE phi after the lens designed for
/// lambda0, by exact refraction. Throws DomainError outside the lens domain.
double trace_exact_aod(double phi, double lambda, const Dispersion& dispersion);

enum class AodForm { lemma, appendix };

/// Small-angle AoD: lemma form n/(n-1) (lambda-lambda0)/lambda phi, or
/// appendix form n0 (lambda-lambda0)/((n0-1) lambda) phi.
double lemma2_aod_approx(double phi, double lambda, const Dispersion& dispersion, AodForm form);

/// Ratio AoD/AoE of the appendix-form mapping, used by the simulated lens.
double compression(double lambda, double n0, double lambda0);

/// The printed optimal pattern R*(phi) = int (1/pi) cos(g(lambda) phi) chi dlambda with
/// g = (n-1) lambda / (n (lambda - lambda0)), restricted to the wavelengths whose
/// source AoE g*phi stays inside the semi-angle. Generalized to cos^m0.
double theorem2_density(double phi, const Spectrum& spectrum, const Dispersion& dispersion,
                        double semi_angle);

/// Energy-conserving pattern of a Lambertian LED behind the collimating
/// lens. Rays with AoE below the capture angle leave at |c(lambda)| * AoE;
/// the rest pass unchanged up to the semi-angle.
class BeamformedPattern {
public:
    BeamformedPattern(const Spectrum& spectrum, double n0, double semi_angle,
                      int table_size = 1500);

    double mode() const { return mode_; }
    double capture() const { return capture_; }
    double semi_angle() const { return semi_angle_; }

    /// Emitted power within departure angle theta (total is the Lambertian
    /// power inside the semi-angle).
    double cone_power(double theta) const;
    double cone_power_slope(double theta) const;

    /// Point density P'(phi) / (2 pi sin phi).
    double density(double phi) const;
    /// Mean density over the cap [phi - a, phi + a].
    double averaged_density(double phi, double aperture) const;

private:
    double lambert_cone(double t) const;
    double lambert_cone_slope(double t) const;
    double spectral_power(double theta) const;
    double spectral_slope(double theta) const;
    std::pair<double, double> spectral_exact(double theta) const;
    double uncollimated(double theta) const;
    double uncollimated_slope(double theta) const;

    Spectrum spectrum_;
    double n0_;
    double mode_;
    double semi_angle_;
    double capture_;
    double log_min_ = 0.0;
    double theta_min_ = 1e-8;
    double s_min_ = 0.0;
    std::unique_ptr<boost::math::interpolators::cubic_hermite<std::vector<double>>> table_;
};

/// Fraction of the floor-integrated intensity that lands inside the
/// size x size square centered under `center`.
double intensity_concentration(const Scenario& s, const RadiationPattern& pattern,
                               const Vec3& center, double size, const Aiming& aiming,
                               int grid_n = 500);

}  // namespace oisac
