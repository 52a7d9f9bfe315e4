#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "oisac/error.hpp"
#include "oisac/optics.hpp"
#include "oisac/rng.hpp"
#include "oisac/sensing.hpp"

using namespace oisac;

namespace {

const Scenario kRoom = Scenario::table2();
const RadiationPattern kLambert = RadiationPattern::lambertian(kPi / 3);

}  // namespace

TEST_CASE("noiseless localization is exact") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double heights[] = {0.0, 0.4, 0.8};
    for (int i = 0; i < 50; ++i) {
        const Vec3 p(u(rng), u(rng), heights[i % 3]);
        const auto sol = localize(kRoom, kLambert, p, Aiming::vertical(), 1.0, 0.0, rng);
        CHECK((sol.world - p).norm() < 1e-9);
    }
}

TEST_CASE("a single camera is rank deficient") {
    const Scenario one = kRoom.with_layout(1.0, {0.5});
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(localize(one, kLambert, Vec3::Zero(), Aiming::vertical(), 1.0, 0.0, rng),
                    RankDeficiencyError);
    MseSetup m;
    m.trials = 100;
    CHECK_THROWS_AS(run_mse(one, kLambert, Vec3::Zero(), Aiming::vertical(), m, {0.0}), RankDeficiencyError);
}

TEST_CASE("identical measurements are rank deficient") {
    std::vector<Measurement> meas(2);
    meas[1].camera = 1;
    const CameraOffsets off{{0.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(assemble_system(meas, off, 0.05, 0.05), RankDeficiencyError);
}

TEST_CASE("assembled system") {
    std::mt19937_64 rng(2);
    const Vec3 p(0.4, 0.3, 0.2);
    const auto rig = build_default_poses(kRoom);
    const auto a = synthesize_measurements(kRoom, kLambert, p, Aiming::vertical(), 1.0, 0.0, rng);
    const auto sys = assemble_system(a, rig.offsets, kRoom.focal_x, kRoom.focal_y);
    CHECK(sys.sigma.rows() == 8);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.sigma);
    CHECK(lu.rank() == 3);
    CHECK(sys.gamma(0) == 0.0);
    CHECK(sys.gamma(1) == 0.0);
    // gamma does not depend on the measurements
    const auto b = synthesize_measurements(kRoom, kLambert, Vec3(-1, 0.5, 0), Aiming::vertical(), 1.0, 1e-20, rng);
    CHECK((assemble_system(b, rig.offsets, kRoom.focal_x, kRoom.focal_y).gamma - sys.gamma).norm() == 0.0);
    // QR and the normal equations agree on well-conditioned systems
    const auto qr = solve_position(sys, rig.poses[0]);
    CHECK((qr.camera - solve_normal_equations(sys)).norm() < 1e-10);
}

TEST_CASE("noise variance follows eta sigma^2 / I_ref") {
    std::mt19937_64 rng(4);
    const Vec3 p(0.4, 0.3, 0.0);
    const std::vector<double> ref{1.0, 2.0, 1.0, 2.0};
    const int n = 10000;
    std::vector<double> sum(4, 0.0);
    const CameraRig rig = build_default_poses(kRoom);
    for (int i = 0; i < n; ++i) {
        const auto meas = synthesize_with_intensity(kRoom, p, ref, 1.0, 1e-6, rng);
        for (const auto& m : meas) {
            const Vec2 exact = camera_to_film(world_to_camera(p, rig.poses[m.camera]), kRoom.focal_x, kRoom.focal_y);
            sum[m.camera] += (m.film - exact).x() * (m.film - exact).x();
        }
    }
    const double v1 = sum[0] / n;
    const double v2 = sum[1] / n;
    CHECK(v1 == doctest::Approx(1e-6).epsilon(0.05));
    CHECK(v2 == doctest::Approx(0.5e-6).epsilon(0.05));
}

TEST_CASE("zero noise measurements are exact projections") {
    std::mt19937_64 rng(4);
    const Vec3 p(0.1, -0.7, 0.4);
    const CameraRig rig = build_default_poses(kRoom);
    for (const auto& m : synthesize_measurements(kRoom, kLambert, p, Aiming::vertical(), 1.0, 0.0, rng)) {
        CHECK(m.variance == 0.0);
        CHECK(m.film == camera_to_film(world_to_camera(p, rig.poses[m.camera]), kRoom.focal_x, kRoom.focal_y));
    }
}

TEST_CASE("unlit cameras are dropped, fewer than two is an error") {
    std::mt19937_64 rng(1);
    const Vec3 p(0.4, 0.3, 0.0);
    CHECK(synthesize_with_intensity(kRoom, p, {1.0, 0.0, 1.0, 1.0}, 1.0, 0.0, rng).size() == 3);
    CHECK_THROWS_AS(synthesize_with_intensity(kRoom, p, {1.0, 0.0, 0.0, 0.0}, 1.0, 0.0, rng),
                    InsufficientIlluminationError);
}

TEST_CASE("beamformed illumination lowers measurement variance by the intensity ratio") {
    const auto beam = RadiationPattern::beamformed(
        std::make_shared<BeamformedPattern>(Spectrum::gaussian(450e-9, 20e-9), 1.4, kPi / 3));
    const Vec3 p(0.4, 0.3, 0.0);
    std::mt19937_64 rng(1);
    const auto a = synthesize_measurements(kRoom, kLambert, p, Aiming::vertical(), 1.0, 1.0, rng);
    const auto b = synthesize_measurements(kRoom, beam, p, Aiming::at(p), 1.0, 1.0, rng);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].variance < a[i].variance);
        CHECK(a[i].variance / b[i].variance == doctest::Approx(b[i].reflected / a[i].reflected).epsilon(1e-12));
    }
}

TEST_CASE("MSE scales with the noise variance") {
    const Vec3 p(0.4, 0.3, 0.0);
    const auto ref = reflected_profile(kRoom, kLambert, p, Aiming::vertical());
    // sigma_I chosen so the film-plane noise is ~1e-6 .. 1e-5 m: small-noise regime
    const double base = std::sqrt(ref[0]) * 1e-6;
    MseSetup m;
    m.trials = 2000;
    m.seed = 8;
    const std::vector<double> sig{base, base * std::sqrt(10.0), base * 10.0};
    const auto r = run_mse(kRoom, kLambert, p, Aiming::vertical(), m, sig);
    const double slope = (std::log10(r[2].mse) - std::log10(r[0].mse)) / (2 * std::log10(sig[2] / sig[0]));
    CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
    const auto z = run_mse(kRoom, kLambert, p, Aiming::vertical(), m, {0.0});
    CHECK(z[0].mse < 1e-18);
}

TEST_CASE("translation equivariance with frozen intensities") {
    const std::vector<double> ref{1.0, 0.8, 1.2, 0.9};
    const Vec3 p(0.4, 0.3, 0.0);
    const Vec3 shift(0.2, -0.1, 0.3);
    const CameraRig rig = build_default_poses(kRoom);
    for (int t = 0; t < 20; ++t) {
        auto r1 = substream(5, t);
        auto r2 = substream(5, t);
        const auto a = synthesize_with_intensity(kRoom, p, ref, 1.0, 1e-10, r1);
        const auto b = synthesize_with_intensity(kRoom, p + shift, ref, 1.0, 1e-10, r2);
        const Vec3 ea = solve_position(assemble_system(a, rig.offsets, 0.05, 0.05), rig.poses[0]).world - p;
        const Vec3 eb = solve_position(assemble_system(b, rig.offsets, 0.05, 0.05), rig.poses[0]).world - (p + shift);
        // same film-plane draws give errors of the same size; depth rescales them slightly
        CHECK(eb.norm() == doctest::Approx(ea.norm()).epsilon(0.25));
    }
    for (int t = 0; t < 20; ++t) {
        auto r1 = substream(6, t);
        auto r2 = substream(6, t);
        const Vec3 planar(0.2, -0.1, 0.0);
        const auto a = synthesize_with_intensity(kRoom, p, ref, 1.0, 0.0, r1);
        const auto b = synthesize_with_intensity(kRoom, p + planar, ref, 1.0, 0.0, r2);
        const Vec3 ea = solve_position(assemble_system(a, rig.offsets, 0.05, 0.05), rig.poses[0]).world;
        const Vec3 eb = solve_position(assemble_system(b, rig.offsets, 0.05, 0.05), rig.poses[0]).world;
        CHECK((eb - ea - planar).norm() < 1e-9);
    }
}

TEST_CASE("MSE is independent of thread count") {
    const Vec3 p(0.4, 0.3, 0.0);
    MseSetup m;
    m.trials = 500;
    m.seed = 3;
    const std::vector<double> sig{1e-7, 1e-6};
    const auto ref = run_mse(kRoom, kLambert, p, Aiming::vertical(), m, sig, Exec::serial);
    for (int threads : {1, 3, 8}) {
        omp_set_num_threads(threads);
        const auto par = run_mse(kRoom, kLambert, p, Aiming::vertical(), m, sig, Exec::parallel);
        for (std::size_t i = 0; i < ref.size(); ++i) CHECK(par[i].mse == ref[i].mse);
    }
}

TEST_CASE("compensated sum") {
    CHECK(compensated_sum({1e100, 1.0, -1e100}) == 1.0);
    CHECK(compensated_sum({}) == 0.0);
}
