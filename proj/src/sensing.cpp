#include "oisac/sensing.hpp"

#include <cmath>
#include <exception>

#include "oisac/error.hpp"
#include "oisac/rng.hpp"

namespace oisac {

std::vector<double> reflected_profile(const Scenario& s, const RadiationPattern& pattern,
                                      const Vec3& target, const Aiming& aiming,
                                      double power_scale) {
    std::vector<double> out;
    for (int m = 0; m < s.num_oaps; ++m)
        out.push_back(power_scale * reflected_intensity(s, pattern, target, m, aiming));
    return out;
}

std::vector<Measurement> synthesize_with_intensity(const Scenario& s, const Vec3& target,
                                                   const std::vector<double>& reflected, double eta,
                                                   double sigma_i2, std::mt19937_64& rng) {
    if (s.num_oaps < 2) throw RankDeficiencyError("sensing: at least two cameras are required");
    if (reflected.size() != static_cast<std::size_t>(s.num_oaps))
        throw ShapeError("sensing: one reflected intensity per camera expected");
    if (!(eta >= 0.0 && sigma_i2 >= 0.0)) throw DomainError("sensing: eta and sigma_i2 must be >= 0");
    const CameraRig rig = build_default_poses(s);
    std::vector<Measurement> out;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int m = 0; m < s.num_oaps; ++m) {
        const double iref = reflected[static_cast<std::size_t>(m)];
        if (!(iref > 0.0)) continue;
        Measurement meas;
        meas.camera = m;
        meas.reflected = iref;
        meas.variance = eta * sigma_i2 / iref;
        const Vec3 pc = world_to_camera(target, rig.poses[static_cast<std::size_t>(m)]);
        meas.film = camera_to_film(pc, s.focal_x, s.focal_y);
        const double sd = std::sqrt(meas.variance);
        const double ex = normal(rng);
        const double ey = normal(rng);
        meas.film += Vec2(sd * ex, sd * ey);
        out.push_back(meas);
    }
    if (out.size() < 2)
        throw InsufficientIlluminationError("sensing: fewer than two cameras see reflected light");
    return out;
}

std::vector<Measurement> synthesize_measurements(const Scenario& s, const RadiationPattern& pattern,
                                                 const Vec3& target, const Aiming& aiming,
                                                 double eta, double sigma_i2, std::mt19937_64& rng,
                                                 double power_scale) {
    if (s.num_oaps < 2) throw RankDeficiencyError("sensing: at least two cameras are required");
    return synthesize_with_intensity(s, target, reflected_profile(s, pattern, target, aiming, power_scale),
                                     eta, sigma_i2, rng);
}

LinearSystem assemble_system(const std::vector<Measurement>& measurements,
                             const CameraOffsets& offsets, double fx, double fy) {
    const auto rows = static_cast<Eigen::Index>(2 * measurements.size());
    LinearSystem sys{Eigen::MatrixXd::Zero(rows, 3), Eigen::VectorXd::Zero(rows)};
    for (std::size_t i = 0; i < measurements.size(); ++i) {
        const auto& m = measurements[i];
        const auto c = static_cast<std::size_t>(m.camera);
        if (c >= offsets.x.size() || c >= offsets.y.size())
            throw ShapeError("assemble: camera index has no offset");
        const auto r = static_cast<Eigen::Index>(2 * i);
        sys.sigma(r, 0) = fx;
        sys.sigma(r, 2) = -m.film.x();
        sys.sigma(r + 1, 1) = fy;
        sys.sigma(r + 1, 2) = -m.film.y();
        sys.gamma(r) = -fx * offsets.x[c];
        sys.gamma(r + 1) = -fy * offsets.y[c];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.sigma);
    if (rows < 3 || qr.rank() < 3) throw RankDeficiencyError("assemble: system has rank below 3");
    return sys;
}

SensingSolution solve_position(const LinearSystem& system, const Pose& pose1) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system.sigma);
    if (system.sigma.rows() < 3 || qr.rank() < 3)
        throw RankDeficiencyError("solve: system has rank below 3");
    SensingSolution sol;
    sol.camera = qr.solve(system.gamma);
    sol.world = camera_to_world(sol.camera, pose1);
    sol.residual = (system.sigma * sol.camera - system.gamma).norm();
    return sol;
}

Vec3 solve_normal_equations(const LinearSystem& system) {
    const Eigen::Matrix3d n = system.sigma.transpose() * system.sigma;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(n);
    if (!lu.isInvertible()) throw RankDeficiencyError("solve: singular normal matrix");
    return lu.solve(system.sigma.transpose() * system.gamma);
}

SensingSolution localize(const Scenario& s, const RadiationPattern& pattern, const Vec3& target,
                         const Aiming& aiming, double eta, double sigma_i2, std::mt19937_64& rng,
                         double power_scale) {
    const auto meas = synthesize_measurements(s, pattern, target, aiming, eta, sigma_i2, rng, power_scale);
    const CameraRig rig = build_default_poses(s);
    return solve_position(assemble_system(meas, rig.offsets, s.focal_x, s.focal_y), rig.poses.front());
}

double compensated_sum(const std::vector<double>& v) {
    double sum = 0.0;
    double c = 0.0;
    for (double x : v) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

std::vector<MsePoint> run_mse(const Scenario& s, const RadiationPattern& pattern,
                              const Vec3& target, const Aiming& aiming, const MseSetup& setup,
                              const std::vector<double>& sigma_i, Exec exec) {
    if (setup.trials < 1) throw DomainError("run_mse: trials must be positive");
    const auto reflected = reflected_profile(s, pattern, target, aiming, setup.power_scale);
    const CameraRig rig = build_default_poses(s);
    {
        // Surface illumination and rank problems once, outside the parallel region.
        auto rng = substream(setup.seed, ~0ULL);
        const auto meas = synthesize_with_intensity(s, target, reflected, setup.eta, 0.0, rng);
        assemble_system(meas, rig.offsets, s.focal_x, s.focal_y);
    }
    std::vector<MsePoint> out;
    for (std::size_t p = 0; p < sigma_i.size(); ++p) {
        const double var = sigma_i[p] * sigma_i[p];
        std::vector<double> sq(static_cast<std::size_t>(setup.trials), 0.0);
        std::exception_ptr failure;
        auto trial = [&](long long t) {
            try {
                auto rng = substream(setup.seed, p, static_cast<std::uint64_t>(t));
                const auto meas = synthesize_with_intensity(s, target, reflected, setup.eta, var, rng);
                const auto sol = solve_position(assemble_system(meas, rig.offsets, s.focal_x, s.focal_y),
                                                rig.poses.front());
                sq[static_cast<std::size_t>(t)] = (sol.world - target).squaredNorm();
            } catch (...) {
#pragma omp critical(oisac_mse_failure)
                if (!failure) failure = std::current_exception();
            }
        };
        const long long n = setup.trials;
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
            for (long long t = 0; t < n; ++t) trial(t);
        } else {
            for (long long t = 0; t < n; ++t) trial(t);
        }
        if (failure) std::rethrow_exception(failure);
        MsePoint pt;
        pt.target = target;
        pt.sigma_i = sigma_i[p];
        pt.trials = setup.trials;
        pt.mse = compensated_sum(sq) / setup.trials;
        out.push_back(pt);
    }
    return out;
}

}  // namespace oisac
