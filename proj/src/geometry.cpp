#include "oisac/geometry.hpp"

#include <cmath>
#include <string>

#include "oisac/error.hpp"

namespace oisac {

double wrap_angle(double a) {
    double w = std::fmod(a, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    if (w >= 2.0 * kPi) w = 0.0;
    return w;
}

std::vector<double> uniform_angles(int mu, double xi0) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(mu));
    for (int m = 0; m < mu; ++m) out.push_back(wrap_angle(xi0 + 2.0 * kPi * m / mu));
    return out;
}

Scenario Scenario::table2(double radius, double xi0) {
    Scenario s;
    s.layout_radius = radius;
    s.layout_angles = uniform_angles(s.num_oaps, xi0);
    return s;
}

void Scenario::validate() const {
    auto fail = [](const std::string& what) { throw DomainError("scenario: " + what); };
    if (!(room_w > 0 && room_l > 0 && room_h > 0)) fail("room dimensions must be positive");
    if (num_oaps < 1) fail("num_oaps must be >= 1");
    if (static_cast<int>(layout_angles.size()) != num_oaps)
        fail("layout_angles must have num_oaps entries");
    if (!(layout_radius >= 0.0 && layout_radius <= std::min(room_w, room_l)))
        fail("layout_radius must lie in [0, min(W, L)]");
    for (double a : layout_angles)
        if (!(a >= 0.0 && a < 2.0 * kPi)) fail("layout angles must lie in [0, 2pi)");
    if (pd_count < 1) fail("pd_count must be >= 1");
    const int side = static_cast<int>(std::lround(std::sqrt(pd_count)));
    if (side * side != pd_count) fail("pd_count must be a perfect square");
    if (!(pd_spacing >= 0.0)) fail("pd_spacing must be >= 0");
    if (!(pd_area > 0.0)) fail("pd_area must be positive");
    if (!(coverage_area > 0.0)) fail("coverage_area must be positive");
    if (!(semi_angle > 0.0 && semi_angle <= kPi / 2)) fail("semi angle must lie in (0, pi/2]");
    if (!(fov > 0.0 && fov <= kPi / 2)) fail("fov must lie in (0, pi/2]");
    if (!(reflectance >= 0.0 && reflectance <= 1.0)) fail("reflectance must lie in [0, 1]");
    if (!(focal_x > 0.0 && focal_y > 0.0)) fail("focal lengths must be positive");
    if (!(sample_rate > 0.0)) fail("sample_rate must be positive");
}

Scenario Scenario::with_layout(double radius, std::vector<double> angles) const {
    Scenario s = *this;
    s.layout_radius = radius;
    s.num_oaps = static_cast<int>(angles.size());
    s.layout_angles = std::move(angles);
    return s;
}

std::vector<Vec3> Scenario::oap_positions() const {
    std::vector<Vec3> out;
    out.reserve(layout_angles.size());
    for (double xi : layout_angles)
        out.emplace_back(layout_radius * std::cos(xi), layout_radius * std::sin(xi), room_h);
    return out;
}

std::vector<Vec3> Scenario::pd_positions(const Vec3& device) const {
    const int side = static_cast<int>(std::lround(std::sqrt(pd_count)));
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(side * side));
    const double c = 0.5 * (side - 1);
    for (int j = 0; j < side; ++j)
        for (int i = 0; i < side; ++i)
            out.emplace_back(device.x() + (i - c) * pd_spacing,
                             device.y() + (j - c) * pd_spacing, device.z());
    return out;
}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
    if ((rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("pose: rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > 1e-12)
        throw DomainError("pose: rotation must have det +1");
}

Vec3 world_to_camera(const Vec3& p_world, const Pose& pose) {
    return pose.rotation() * p_world + pose.translation();
}

Vec3 camera_to_world(const Vec3& p_cam, const Pose& pose) {
    return pose.rotation().transpose() * (p_cam - pose.translation());
}

Vec2 camera_to_film(const Vec3& p_cam, double fx, double fy) {
    if (std::abs(p_cam.z()) < 1e-12)
        throw DegenerateDepthError("projection: point lies in the pinhole plane");
    return {fx * p_cam.x() / p_cam.z(), fy * p_cam.y() / p_cam.z()};
}

CameraRig build_default_poses(const Scenario& scenario) {
    const Mat3 down = Vec3(1.0, -1.0, -1.0).asDiagonal();
    const auto oaps = scenario.oap_positions();
    CameraRig rig;
    for (const auto& p : oaps) {
        rig.poses.emplace_back(down, -down * p);
        // x_{C,m} = x_{C,1} + rho_x,m follows from p_C,m - p_C,1 = Q (p_OAP,1 - p_OAP,m).
        const Vec3 d = down * (oaps.front() - p);
        rig.offsets.x.push_back(d.x());
        rig.offsets.y.push_back(d.y());
    }
    return rig;
}

double film_half_extent(double focal, double fov) { return focal * std::tan(fov); }

}  // namespace oisac
