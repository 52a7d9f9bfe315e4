#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <vector>

namespace oisac {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wrap an angle into [0, 2*pi).
double wrap_angle(double a);

/// Angles of a uniform circular layout: xi0 + 2*pi*m/mu, wrapped.
std::vector<double> uniform_angles(int mu, double xi0);

/// Room, O-AP layout, device and camera parameters. Angles in radians.
///
/// The origin sits at the floor center; O-AP m hangs at
/// (eps cos xi_m, eps sin xi_m, H).
struct Scenario {
    double room_w = 5.0;
    double room_l = 5.0;
    double room_h = 3.0;
    int num_oaps = 4;
    double layout_radius = 0.0;
    std::vector<double> layout_angles;
    int pd_count = 4;
    double pd_spacing = 0.01;
    double pd_area = 1e-6;
    double semi_angle = kPi / 3.0;
    double fov = kPi / 3.0;
    double reflectance = 0.8;
    double focal_x = 0.05;
    double focal_y = 0.05;
    /// Collecting aperture behind the coverage threshold rho_I. Only the
    /// layout objective, the closed-form layout and coverage maps use it.
    double coverage_area = 1.56e-3;
    /// Receiver sample rate, 1/T_sam.
    double sample_rate = 1e6;

    /// Default 5 x 5 x 3 m room with a uniform layout at the given radius and phase.
    static Scenario table2(double radius = 1.7, double xi0 = kPi / 4.0);

    /// Throws DomainError on any violated invariant.
    void validate() const;

    Scenario with_layout(double radius, std::vector<double> angles) const;

    std::vector<Vec3> oap_positions() const;

    /// PD centers of a device whose array is centered at `device`:
    /// a sqrt(kappa) x sqrt(kappa) square grid with pitch pd_spacing.
    std::vector<Vec3> pd_positions(const Vec3& device) const;
};

/// Rigid world-to-camera transform p_C = Q p_D + t.
class Pose {
public:
    Pose() = default;
    /// Throws DomainError unless Q is orthonormal with det +1.
    Pose(const Mat3& rotation, const Vec3& translation);

    const Mat3& rotation() const { return rotation_; }
    const Vec3& translation() const { return translation_; }

private:
    Mat3 rotation_ = Mat3::Identity();
    Vec3 translation_ = Vec3::Zero();
};

/// Per-camera offsets from camera 1 in the shared camera orientation.
struct CameraOffsets {
    std::vector<double> x;
    std::vector<double> y;
};

struct CameraRig {
    std::vector<Pose> poses;
    CameraOffsets offsets;
};

Vec3 world_to_camera(const Vec3& p_world, const Pose& pose);
Vec3 camera_to_world(const Vec3& p_cam, const Pose& pose);

/// Pinhole projection onto the film plane. Throws DegenerateDepthError when
/// |z_C| < 1e-12.
Vec2 camera_to_film(const Vec3& p_cam, double fx, double fy);

/// Downward-facing cameras (Q = diag(1,-1,-1)) with their pinholes at the
/// O-AP positions.
CameraRig build_default_poses(const Scenario& scenario);

/// Half-width of the film plane implied by a half-angle field of view.
double film_half_extent(double focal, double fov);

}  // namespace oisac
