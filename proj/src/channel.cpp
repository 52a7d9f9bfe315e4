#include "oisac/channel.hpp"

#include <algorithm>
#include <cmath>

#include "oisac/error.hpp"
#include "oisac/optics.hpp"

namespace oisac {

double lambert_mode(double semi_angle) {
    if (!(semi_angle > 0.0 && semi_angle < kPi / 2))
        throw DomainError("lambert_mode: semi-angle must lie in (0, pi/2)");
    const double m0 = -1.0 / std::log2(std::cos(semi_angle));
    if (!(m0 <= 1e6)) throw DomainError("lambert_mode: mode number exceeds 1e6");
    return m0;
}

RadiationPattern RadiationPattern::lambertian(double semi_angle) {
    RadiationPattern p;
    p.kind_ = Kind::lambertian;
    p.mode_ = lambert_mode(semi_angle);
    return p;
}

RadiationPattern RadiationPattern::beamformed(std::shared_ptr<const BeamformedPattern> lens) {
    if (!lens) throw DomainError("beamformed pattern: null lens");
    RadiationPattern p;
    p.kind_ = Kind::beamformed;
    p.mode_ = lens->mode();
    p.lens_ = std::move(lens);
    return p;
}

double RadiationPattern::evaluate(double phi) const {
    phi = std::abs(phi);
    if (kind_ == Kind::beamformed) return lens_->density(phi);
    if (phi >= kPi / 2) return 0.0;
    return (mode_ + 1.0) / (2.0 * kPi) * std::pow(std::cos(phi), mode_);
}

double RadiationPattern::evaluate(double phi, double aperture) const {
    if (kind_ == Kind::beamformed) return lens_->averaged_density(std::abs(phi), aperture);
    return evaluate(phi);
}

double RadiationPattern::cone_power(double theta) const {
    if (kind_ == Kind::beamformed) return lens_->cone_power(theta);
    theta = std::clamp(theta, 0.0, kPi / 2);
    return 1.0 - std::pow(std::cos(theta), mode_ + 1.0);
}

double received_intensity(const Scenario& s, const RadiationPattern& pattern,
                          const Vec3& source, const Vec3& point, const Aiming& aiming,
                          double area) {
    const Vec3 v = point - source;
    const double d2 = v.squaredNorm();
    if (!(d2 > 0.0)) throw DomainError("received_intensity: point coincides with the source");
    const double d = std::sqrt(d2);
    const double cos_psi = (source.z() - point.z()) / d;
    if (cos_psi <= 0.0 || cos_psi < std::cos(s.fov)) return 0.0;

    double cos_phi = cos_psi;
    if (aiming.aimed) {
        const Vec3 axis = aiming.target - source;
        const double n = axis.norm();
        if (n > 0.0) cos_phi = std::clamp(axis.dot(v) / (n * d), -1.0, 1.0);
    }
    if (cos_phi <= 0.0 || cos_phi < std::cos(s.semi_angle)) return 0.0;

    if (pattern.kind() == RadiationPattern::Kind::lambertian) {
        // cos^m0(phi) directly; going through acos would lose the closed-form agreement.
        const double r = (pattern.mode() + 1.0) / (2.0 * kPi) * std::pow(cos_phi, pattern.mode());
        return r * area * cos_psi / d2;
    }
    const double phi = std::acos(cos_phi);
    const double aperture = std::sqrt(area / kPi) / d;
    return pattern.evaluate(phi, aperture) * area * cos_psi / d2;
}

double received_intensity(const Scenario& s, const RadiationPattern& pattern, int m, int k,
                          const Vec3& device, const Aiming& aiming) {
    const auto oaps = s.oap_positions();
    const auto pds = s.pd_positions(device);
    if (m < 0 || m >= static_cast<int>(oaps.size()) || k < 0 || k >= static_cast<int>(pds.size()))
        throw ShapeError("received_intensity: index out of range");
    return received_intensity(s, pattern, oaps[static_cast<std::size_t>(m)],
                              pds[static_cast<std::size_t>(k)], aiming, s.pd_area);
}

double superposed_intensity(const Scenario& s, const RadiationPattern& pattern,
                            const Vec3& point, const Aiming& aiming, double area) {
    double sum = 0.0;
    for (const auto& src : s.oap_positions())
        sum += received_intensity(s, pattern, src, point, aiming, area);
    return sum;
}

double reflected_intensity(const Scenario& s, const RadiationPattern& pattern,
                           const Vec3& target, int m, const Aiming& aiming) {
    const auto oaps = s.oap_positions();
    if (m < 0 || m >= static_cast<int>(oaps.size()))
        throw ShapeError("reflected_intensity: index out of range");
    const double incident = superposed_intensity(s, pattern, target, aiming, s.pd_area);
    const Vec3 v = oaps[static_cast<std::size_t>(m)] - target;
    const double d2 = v.squaredNorm();
    const double cos_phi = v.z() / std::sqrt(d2);
    // The camera sits at the O-AP and looks straight down with the same FOV.
    if (cos_phi <= 0.0 || cos_phi < std::cos(s.fov)) return 0.0;
    return incident * s.reflectance * s.pd_area * cos_phi / d2;
}

ChannelState compute_channel(const Scenario& s, const RadiationPattern& pattern,
                             const Vec3& device, const Aiming& aiming) {
    const auto oaps = s.oap_positions();
    const auto pds = s.pd_positions(device);
    const auto mu = static_cast<Eigen::Index>(oaps.size());
    const auto kappa = static_cast<Eigen::Index>(pds.size());
    ChannelState ch{Eigen::MatrixXd(mu, kappa), Eigen::MatrixXd(mu, kappa),
                    Eigen::MatrixXd(mu, kappa)};
    for (Eigen::Index m = 0; m < mu; ++m) {
        for (Eigen::Index k = 0; k < kappa; ++k) {
            const auto& src = oaps[static_cast<std::size_t>(m)];
            const auto& pd = pds[static_cast<std::size_t>(k)];
            ch.gains(m, k) = received_intensity(s, pattern, src, pd, aiming, s.pd_area);
            ch.distances(m, k) = (pd - src).norm();
            ch.delays(m, k) = ch.distances(m, k) / kSpeedOfLight;
        }
    }
    return ch;
}

}  // namespace oisac
