#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oisac/config.hpp"
#include "oisac/kernels.hpp"
#include "oisac/modem.hpp"
#include "oisac/sensing.hpp"

namespace oisac {

/// One system configuration compared in the BER/MSE experiments.
struct SystemVariant {
    std::string id;
    RadiationPattern pattern;
    Aiming aiming;
    Constellation constellation = Constellation::bpsk;
    double power_scale = 1.0;
};

/// directionless (Phase 1, BPSK), separate (same, half power per function)
/// and directional (aimed beamformed sources, 16QAM) at `target`.
std::vector<SystemVariant> system_variants(const Config& cfg, const Vec3& target);

RadiationPattern make_beamformed(const Config& cfg);

struct Phase1Output {
    FloorGrid grid;
    std::vector<double> intensity;  // over pd_area
    double area_fraction = 0.0;     // over coverage_area at rho_i
    FloorGrid metric_grid;
    std::vector<double> ber;  // analytic post-MRC BPSK BER at map_ebn0_db
    std::vector<double> mse;  // Monte Carlo at map_snr_db; inf where sensing fails
};

/// Directionless broadcast with the configured layout.
Phase1Output run_phase1(const Config& cfg, const Scenario& layout, std::uint64_t seed,
                        Exec exec = Exec::parallel);

struct Phase2Output {
    Vec3 target = Vec3::Zero();
    double intensity_directional = 0.0;
    double intensity_directionless = 0.0;
    double intensity_misaimed = 0.0;
    double concentration_phase1 = 0.0;
    double concentration_phase2 = 0.0;
    double concentration_misaimed = 0.0;
    FloorGrid grid;
    std::vector<double> intensity;
};

/// Aimed, beamformed service of one target.
Phase2Output run_phase2(const Config& cfg, const Vec3& target, Exec exec = Exec::parallel);

/// Smallest x in [lo, hi] (to tol) with metric(x) <= target, for a metric
/// that is non-increasing in x. Throws NotBracketedError.
double bisect_db(const std::function<double(double)>& metric, double target, double lo, double hi,
                 double tol);

struct RequiredPower {
    std::string id;
    double ber_db = 0.0;
    double mse_db = 0.0;
};

/// Eb/N0 for BER = ber_target and sensing SNR (10 log10 1/sigma_I^2) for
/// MSE = mse_target, per system variant, at the configured device.
std::vector<RequiredPower> run_required_power(const Config& cfg, std::uint64_t seed,
                                              Exec exec = Exec::parallel);

struct RunContext {
    Config cfg;
    std::uint64_t seed = 1;
    std::filesystem::path out = ".";
    Exec exec = Exec::parallel;
};

struct LayoutOptions {
    std::optional<double> rho_i;
    std::optional<int> mu;
    std::optional<int> grid_n;
    std::optional<Theorem1Variant> variant;
    std::optional<std::filesystem::path> surface_out;
};

struct LensOptions {
    std::optional<std::filesystem::path> sweep_out;
};

void experiment_coverage(const RunContext& ctx);
void experiment_layout(const RunContext& ctx, const LayoutOptions& opt);
void experiment_ber(const RunContext& ctx);
void experiment_mse(const RunContext& ctx);
void experiment_lens(const RunContext& ctx, const LensOptions& opt);
void experiment_intensity(const RunContext& ctx);
void experiment_required_power(const RunContext& ctx);

}  // namespace oisac
