#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "oisac/error.hpp"
#include "oisac/kernels.hpp"
#include "oisac/optics.hpp"

using namespace oisac;

namespace {

const Dispersion kFig8 = Dispersion::inverse(1.4, 450e-9);

double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

}  // namespace

TEST_CASE("gaussian spectrum is normalized") {
    const Spectrum s = Spectrum::gaussian(450e-9, 20e-9);
    CHECK(s.lo() == doctest::Approx(390e-9));
    CHECK(s.hi() == doctest::Approx(510e-9));
    const double total = gk([&](double l) { return s.density(l); }, s.lo(), s.hi());
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.mass(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.density(380e-9) == 0.0);
    CHECK_THROWS_AS(Spectrum::gaussian(-1, 20e-9), DomainError);
}

TEST_CASE("inverse dispersion") {
    CHECK(kFig8.n0() == doctest::Approx(1.4));
    CHECK(kFig8.index(420e-9) == doctest::Approx(1.5));
    CHECK(kFig8.index(500e-9) < kFig8.index(400e-9));
}

TEST_CASE("snell refraction") {
    SUBCASE("normal incidence passes straight") {
        const Vec2 out = snell_refract(Vec2(0, 1), Vec2(0, 1), 1.5, 1.0);
        CHECK((out - Vec2(0, 1)).norm() < 1e-15);
    }
    SUBCASE("30 degrees from glass into air") {
        const double b = deg2rad(30);
        const Vec2 out = snell_refract(Vec2(std::sin(b), std::cos(b)), Vec2(0, 1), 1.5, 1.0);
        CHECK(std::asin(out.x()) == doctest::Approx(std::asin(0.75)).epsilon(1e-14));
        CHECK(rad2deg(std::asin(out.x())) == doctest::Approx(48.59).epsilon(1e-4));
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("supercritical angle") {
        const double b = deg2rad(45);
        CHECK_THROWS_AS(snell_refract(Vec2(std::sin(b), std::cos(b)), Vec2(0, 1), 1.5, 1.0),
                        TotalInternalReflectionError);
    }
    SUBCASE("normal orientation does not matter") {
        const Vec2 d = Vec2(0.3, 1).normalized();
        const Vec2 n = Vec2(0.1, 1).normalized();
        CHECK((snell_refract(d, n, 1.4, 1.0) - snell_refract(d, -n, 1.4, 1.0)).norm() < 1e-15);
    }
}

TEST_CASE("collimating surface normal") {
    CHECK((lemma1_normal(0.0, 1.4) - Vec2(0, 1)).norm() < 1e-15);
    const Vec2 n = lemma1_normal(kPi / 6, 1.4);
    const Vec2 want = Vec2(0.7, 1.4 * std::cos(kPi / 6) - 1).normalized();
    CHECK((n - want).norm() < 1e-15);
    CHECK(want.y() / want.x() == doctest::Approx(0.2124 / 0.7).epsilon(1e-3));
}

TEST_CASE("exact trace collimates the design wavelength") {
    const double cap = lens_capture(kPi / 3, 1.4);
    CHECK(cap == doctest::Approx(std::acos(1 / 1.4)));
    for (int i = 0; i < 100; ++i) {
        const double phi = -cap + 2 * cap * (i + 0.5) / 100;
        CHECK(std::abs(trace_exact_aod(phi, 450e-9, kFig8)) < 1e-12);
    }
    for (double l : {400e-9, 420e-9, 480e-9}) CHECK(trace_exact_aod(0.0, l, kFig8) == 0.0);
    CHECK_THROWS_AS(trace_exact_aod(cap + 1e-3, 420e-9, kFig8), DomainError);
}

TEST_CASE("small-angle AoD forms") {
    CHECK(lemma2_aod_approx(0.2, 450e-9, kFig8, AodForm::lemma) == 0.0);
    CHECK(lemma2_aod_approx(0.2, 450e-9, kFig8, AodForm::appendix) == 0.0);
    CHECK(lemma2_aod_approx(0.2, 420e-9, kFig8, AodForm::appendix) == doctest::Approx(-0.05).epsilon(1e-12));
    // lemma form uses n(420 nm) = 1.5: 3 * (-30/420) * 0.2
    CHECK(lemma2_aod_approx(0.2, 420e-9, kFig8, AodForm::lemma) ==
          doctest::Approx(3.0 * (-30.0 / 420.0) * 0.2).epsilon(1e-12));
    // small-angle slope of the exact trace agrees with the appendix coefficient
    const double phi = 1e-4;
    CHECK(trace_exact_aod(phi, 420e-9, kFig8) / phi == doctest::Approx(-0.25).epsilon(1e-3));
    CHECK(compression(420e-9, 1.4, 450e-9) == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("approximation error grows with the AoE") {
    for (auto form : {AodForm::lemma, AodForm::appendix}) {
        double prev = 0.0;
        for (int i = 1; i <= 30; ++i) {
            const double phi = 0.01 * i;
            const double exact = trace_exact_aod(phi, 420e-9, kFig8);
            const double err = std::abs(lemma2_aod_approx(phi, 420e-9, kFig8, form) - exact) / std::abs(exact);
            CHECK(err >= prev);
            prev = err;
        }
    }
}

TEST_CASE("printed optimal pattern") {
    const Spectrum g = Spectrum::gaussian(450e-9, 20e-9);
    CHECK(theorem2_density(0.0, g, kFig8, kPi / 3) == doctest::Approx(1 / kPi).epsilon(1e-15));
    CHECK(theorem2_density(0.0, Spectrum::monochromatic(450e-9), kFig8, kPi / 3) ==
          doctest::Approx(1 / kPi).epsilon(1e-15));
    double prev = 1 / kPi;
    for (double phi = 0.005; phi < 0.3; phi += 0.005) {
        const double v = theorem2_density(phi, g, kFig8, kPi / 3);
        CHECK(v <= 1 / kPi);
        CHECK(v >= 0.0);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("beamformed pattern conserves emitted power") {
    const BeamformedPattern b(Spectrum::gaussian(450e-9, 20e-9), 1.4, kPi / 3);
    const auto lambert = RadiationPattern::lambertian(kPi / 3);
    CHECK(b.cone_power(kPi / 2) == doctest::Approx(lambert.cone_power(kPi / 3)).epsilon(1e-9));
    CHECK(b.cone_power(0.0) == 0.0);
    double prev = 0.0;
    for (double t = 1e-6; t < 1.2; t *= 1.3) {
        const double p = b.cone_power(t);
        CHECK(p >= prev);
        prev = p;
    }
    // density integrates back to the cone power
    const double via_density =
        gk([&](double phi) { return b.density(phi) * 2 * kPi * std::sin(phi); }, 1e-3, 0.5);
    CHECK(via_density == doctest::Approx(b.cone_power(0.5) - b.cone_power(1e-3)).epsilon(1e-6));
}

TEST_CASE("beamformed pattern concentrates on the axis") {
    const BeamformedPattern b(Spectrum::gaussian(450e-9, 20e-9), 1.4, kPi / 3);
    const auto lambert = RadiationPattern::lambertian(kPi / 3);
    const double peak = b.averaged_density(0.0, 1e-3);
    CHECK(peak > 100 * lambert.evaluate(0.0));
    // half-power angle far narrower than the Lambertian semi-angle
    double half = 0.0;
    for (double phi = 1e-3; phi < 1.0; phi += 1e-3)
        if (b.averaged_density(phi, 5e-4) < 0.5 * peak) {
            half = phi;
            break;
        }
    CHECK(half > 0.0);
    CHECK(half < 0.1 * kPi / 3);
}

TEST_CASE("aperture average matches the point density away from the axis") {
    const BeamformedPattern b(Spectrum::gaussian(450e-9, 20e-9), 1.4, kPi / 3);
    for (double phi : {0.05, 0.2, 0.6, 0.9})
        CHECK(b.averaged_density(phi, 1e-4) == doctest::Approx(b.density(phi)).epsilon(1e-4));
}

TEST_CASE("intensity concentration") {
    const Scenario s = Scenario::table2();
    const auto lambert = RadiationPattern::lambertian(s.semi_angle);
    const Vec3 dev(0.4, 0.3, 0.0);
    CHECK(intensity_concentration(s, lambert, dev, 0.0, Aiming::vertical(), 200) == 0.0);
    CHECK(intensity_concentration(s, lambert, Vec3::Zero(), 20.0, Aiming::vertical(), 200) ==
          doctest::Approx(1.0));
    const auto b = RadiationPattern::beamformed(
        std::make_shared<BeamformedPattern>(Spectrum::gaussian(450e-9, 20e-9), 1.4, kPi / 3));
    const double p1 = intensity_concentration(s, lambert, dev, 0.5, Aiming::vertical(), 200);
    const double p2 = intensity_concentration(s, b, dev, 0.5, Aiming::at(dev), 200);
    CHECK(p2 > 10 * p1);
}

TEST_CASE("floor-integrated beamformed intensity never exceeds emitted power") {
    Scenario s = Scenario::table2();
    s.room_w = s.room_l = 20.0;
    const auto b = RadiationPattern::beamformed(
        std::make_shared<BeamformedPattern>(Spectrum::gaussian(450e-9, 20e-9), 1.4, kPi / 3));
    const FloorGrid g = FloorGrid::of(s, 800, 0.0);
    const Vec3 dev(0.4, 0.3, 0.0);
    const auto map = intensity_map(s, b, Aiming::at(dev), g, g.dx * g.dy, Exec::parallel);
    double total = 0.0;
    for (double v : map) total += v;
    const double emitted = s.num_oaps * b.cone_power(kPi / 2);
    CHECK(total <= emitted * (1 + 1e-3));
    CHECK(total > 0.5 * emitted);
}
