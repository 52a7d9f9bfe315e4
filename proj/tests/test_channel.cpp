#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "oisac/channel.hpp"
#include "oisac/error.hpp"
#include "oisac/modem.hpp"
#include "oisac/optics.hpp"

using namespace oisac;

namespace {

RadiationPattern beam() {
    static const auto lens =
        std::make_shared<BeamformedPattern>(Spectrum::gaussian(450e-9, 20e-9), 1.4, kPi / 3);
    return RadiationPattern::beamformed(lens);
}

}  // namespace

TEST_CASE("lambert mode") {
    CHECK(lambert_mode(kPi / 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lambert_mode(kPi / 4) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(lambert_mode(1e-6), DomainError);
    CHECK_THROWS_AS(lambert_mode(0.0), DomainError);
    CHECK_THROWS_AS(lambert_mode(kPi / 2), DomainError);
}

TEST_CASE("lambertian pattern integrates to one over the hemisphere") {
    for (double semi : {kPi / 3, kPi / 4, kPi / 6}) {
        const auto r = RadiationPattern::lambertian(semi);
        const double total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double phi) { return r.evaluate(phi) * 2 * kPi * std::sin(phi); }, 0.0, kPi / 2, 10, 1e-12);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("vertical source straight above the device") {
    Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 src(0, 0, 3);
    const double v = received_intensity(s, r, src, Vec3::Zero(), Aiming::vertical(), 1e-6);
    CHECK(v == doctest::Approx(1e-6 * 9 / (kPi * 81)).epsilon(1e-14));
    CHECK(v == doctest::Approx(3.537e-8).epsilon(1e-3));
}

TEST_CASE("vertical closed form A H^2 / (pi d^4)") {
    const Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 src(0.3, -0.2, 3);
    for (double x = -1.5; x <= 1.5; x += 0.25) {
        const Vec3 p(x, 0.5 * x, 0);
        const double d = (p - src).norm();
        const double v = received_intensity(s, r, src, p, Aiming::vertical(), 1e-6);
        CHECK(std::abs(v - 1e-6 * 9 / (kPi * std::pow(d, 4))) <= 1e-12 * v);
    }
}

TEST_CASE("hard cutoffs outside the semi-angle and FOV") {
    Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 src(0, 0, 3);
    // 3 tan(60 deg) = 5.196 m off axis is past the cone
    CHECK(received_intensity(s, r, src, Vec3(5.3, 0, 0), Aiming::vertical(), 1e-6) == 0.0);
    s.fov = kPi / 6;
    CHECK(received_intensity(s, r, src, Vec3(2.0, 0, 0), Aiming::vertical(), 1e-6) == 0.0);
    CHECK(received_intensity(s, r, src, Vec3(1.5, 0, 0), Aiming::vertical(), 1e-6) > 0.0);
}

TEST_CASE("intensity strictly decreases with distance along a ray") {
    const Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 src(0, 0, 3);
    const Vec3 dir = Vec3(0.3, 0.1, -1).normalized();
    double prev = INFINITY;
    for (double t = 0.5; t < 3.0; t += 0.1) {
        const double v = received_intensity(s, r, src, src + t * dir, Aiming::vertical(), 1e-6);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("superposition") {
    Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 c = Vec3::Zero();
    const double one = received_intensity(s, r, s.oap_positions()[0], c, Aiming::vertical(), 1e-6);
    CHECK(superposed_intensity(s, r, c, Aiming::vertical(), 1e-6) == doctest::Approx(4 * one).epsilon(1e-14));
    const Scenario single = s.with_layout(s.layout_radius, {s.layout_angles[0]});
    CHECK(superposed_intensity(single, r, c, Aiming::vertical(), 1e-6) == one);
}

TEST_CASE("channel gains equal received intensity with unit transmit power") {
    const Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 dev(0.4, 0.3, 0.0);
    const auto ch = compute_channel(s, r, dev, Aiming::vertical());
    for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 4; ++k) {
            CHECK(ch.gains(m, k) == received_intensity(s, r, m, k, dev, Aiming::vertical()));
            CHECK(ch.delays(m, k) == ch.distances(m, k) / kSpeedOfLight);
        }
}

TEST_CASE("delay phases are negligible at the configured sample rate") {
    const Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const auto ch = compute_channel(s, r, Vec3(0.4, 0.3, 0.0), Aiming::vertical());
    const CMatrix h = subcarrier_response(ch, 32, s.sample_rate);
    for (int k = 0; k < 4; ++k) {
        const double sum = ch.gains.col(k).sum();
        for (int n = 0; n < 32; ++n) CHECK(std::abs(std::abs(h(n, k)) - sum) < 1e-3 * sum);
    }
}

TEST_CASE("reflected intensity") {
    Scenario s = Scenario::table2();
    const auto r = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 c = Vec3::Zero();
    const double incident = superposed_intensity(s, r, c, Aiming::vertical(), s.pd_area);
    for (int m = 0; m < 4; ++m) {
        const double v = reflected_intensity(s, r, c, m, Aiming::vertical());
        CHECK(v > 0.0);
        CHECK(v < incident);
    }
    s.reflectance = 0.0;
    CHECK(reflected_intensity(s, r, c, 0, Aiming::vertical()) == 0.0);
    CHECK_THROWS_AS(reflected_intensity(s, r, c, 7, Aiming::vertical()), ShapeError);
}

TEST_CASE("aimed beamformed source on boresight beats the Lambertian peak") {
    const Scenario s = Scenario::table2();
    const Vec3 dev(0.4, 0.3, 0.0);
    const Vec3 src = s.oap_positions()[0];
    const double d2 = (dev - src).squaredNorm();
    const double v = received_intensity(s, beam(), src, dev, Aiming::at(dev), s.pd_area);
    const double r0 = v * d2 / (s.pd_area * (src.z() - dev.z()) / std::sqrt(d2));
    CHECK(r0 > 1 / kPi);
    CHECK(v > 10 * received_intensity(s, RadiationPattern::lambertian(s.semi_angle), src, dev,
                                      Aiming::vertical(), s.pd_area));
}
