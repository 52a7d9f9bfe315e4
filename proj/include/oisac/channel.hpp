#pragma once

#include <memory>
#include <vector>

#include "oisac/geometry.hpp"

namespace oisac {

class BeamformedPattern;

/// m_0 = -1/log2(cos(semi_angle)). Throws DomainError outside (0, pi/2) or
/// when m_0 would exceed 1e6.
double lambert_mode(double semi_angle);

/// Emission density R(phi) in sr^-1 over the departure angle.
class RadiationPattern {
public:
    enum class Kind { lambertian, beamformed };

    static RadiationPattern lambertian(double semi_angle);
    static RadiationPattern beamformed(std::shared_ptr<const BeamformedPattern> lens);

    Kind kind() const { return kind_; }
    double mode() const { return mode_; }
    const BeamformedPattern* lens() const { return lens_.get(); }

    /// Point density at departure angle phi (no cone cutoff applied here).
    double evaluate(double phi) const;

    /// Density averaged over a receiver seen under half-angle `aperture`.
    /// Lambertian patterns return the point value; beamformed patterns
    /// need the average since the collimated peak is integrable but not
    /// bounded.
    double evaluate(double phi, double aperture) const;

    /// Fraction of the unit emitted power leaving within [0, theta].
    double cone_power(double theta) const;

private:
    Kind kind_ = Kind::lambertian;
    double mode_ = 1.0;
    std::shared_ptr<const BeamformedPattern> lens_;
};

/// Source orientation. Vertical sources look straight down; aimed sources
/// put their boresight through `target`. PDs always face up.
struct Aiming {
    bool aimed = false;
    Vec3 target = Vec3::Zero();

    static Aiming vertical() { return {}; }
    static Aiming at(const Vec3& p) { return {true, p}; }
};

/// Intensity collected by an upward-facing aperture of `area` at `point`
/// from a unit-power source at `source`: R(phi) A cos(psi) / d^2, zero when
/// phi exceeds the semi-angle or psi exceeds the FOV.
double received_intensity(const Scenario& s, const RadiationPattern& pattern,
                          const Vec3& source, const Vec3& point, const Aiming& aiming,
                          double area);

/// Intensity at PD k of a device centered at `device` from O-AP m.
double received_intensity(const Scenario& s, const RadiationPattern& pattern, int m, int k,
                          const Vec3& device, const Aiming& aiming);

/// Sum over all O-APs of received_intensity at `point`.
double superposed_intensity(const Scenario& s, const RadiationPattern& pattern,
                            const Vec3& point, const Aiming& aiming, double area);

/// Light reflected by a target of area pd_area back toward O-AP m:
/// [sum_m I_rx(target)] * rho_ref * A * cos(phi_m) / d_m^2.
double reflected_intensity(const Scenario& s, const RadiationPattern& pattern,
                           const Vec3& target, int m, const Aiming& aiming);

/// Per-(O-AP, PD) gains, distances and propagation delays.
struct ChannelState {
    Eigen::MatrixXd gains;      // mu x kappa
    Eigen::MatrixXd distances;  // mu x kappa, meters
    Eigen::MatrixXd delays;     // mu x kappa, seconds
};

ChannelState compute_channel(const Scenario& s, const RadiationPattern& pattern,
                             const Vec3& device, const Aiming& aiming);

}  // namespace oisac
