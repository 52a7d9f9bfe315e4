#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oisac/channel.hpp"
#include "oisac/kernels.hpp"

namespace oisac {

/// Noisy film-plane coordinates of the target seen by camera `camera`.
struct Measurement {
    int camera = 0;
    Vec2 film = Vec2::Zero();
    double variance = 0.0;
    double reflected = 0.0;
};

/// I_ref for every camera, scaled by the transmit power fraction.
std::vector<double> reflected_profile(const Scenario& s, const RadiationPattern& pattern,
                                      const Vec3& target, const Aiming& aiming,
                                      double power_scale = 1.0);

/// Exact projections plus N(0, eta sigma_i2 / I_ref) per axis. Cameras that
/// receive no reflected light are dropped. Throws RankDeficiencyError for a
/// single camera and InsufficientIlluminationError when fewer than two see
/// the target.
std::vector<Measurement> synthesize_measurements(const Scenario& s, const RadiationPattern& pattern,
                                                 const Vec3& target, const Aiming& aiming,
                                                 double eta, double sigma_i2, std::mt19937_64& rng,
                                                 double power_scale = 1.0);

/// Same, with the reflected intensities held fixed by the caller.
std::vector<Measurement> synthesize_with_intensity(const Scenario& s, const Vec3& target,
                                                   const std::vector<double>& reflected, double eta,
                                                   double sigma_i2, std::mt19937_64& rng);

struct LinearSystem {
    Eigen::MatrixXd sigma;  // 2 * cameras x 3
    Eigen::VectorXd gamma;
};

/// Rows [f_x, 0, -x_m] and [0, f_y, -y_m]; gamma = (-f_x rho_x,m, -f_y rho_y,m).
/// Throws RankDeficiencyError when the matrix has rank below 3.
LinearSystem assemble_system(const std::vector<Measurement>& measurements,
                             const CameraOffsets& offsets, double fx, double fy);

struct SensingSolution {
    Vec3 camera = Vec3::Zero();  // estimate in camera-1 coordinates
    Vec3 world = Vec3::Zero();
    double residual = 0.0;
};

/// Least-squares solve by column-pivoted QR, mapped back through pose 1.
SensingSolution solve_position(const LinearSystem& system, const Pose& pose1);

/// (S^T S)^-1 S^T gamma, kept for cross-checking the QR path.
Vec3 solve_normal_equations(const LinearSystem& system);

/// Synthesize, assemble and solve once.
SensingSolution localize(const Scenario& s, const RadiationPattern& pattern, const Vec3& target,
                         const Aiming& aiming, double eta, double sigma_i2, std::mt19937_64& rng,
                         double power_scale = 1.0);

struct MsePoint {
    Vec3 target = Vec3::Zero();
    double sigma_i = 0.0;
    int trials = 0;
    double mse = 0.0;
};

struct MseSetup {
    double eta = 1.0;
    int trials = 1000;
    std::uint64_t seed = 1;
    /// Fraction of the transmit power given to sensing.
    double power_scale = 1.0;
};

/// Monte Carlo localization MSE at one target for each sigma_I.
std::vector<MsePoint> run_mse(const Scenario& s, const RadiationPattern& pattern,
                              const Vec3& target, const Aiming& aiming, const MseSetup& setup,
                              const std::vector<double>& sigma_i, Exec exec = Exec::parallel);

/// Neumaier-compensated sum, in index order.
double compensated_sum(const std::vector<double>& v);

}  // namespace oisac
