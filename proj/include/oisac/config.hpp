#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oisac/geometry.hpp"
#include "oisac/layout.hpp"
#include "oisac/modem.hpp"
#include "oisac/optics.hpp"

namespace oisac {

/// Inclusive dB sweep start:step:stop.
struct Sweep {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

struct LayoutParams {
    double rho_i = 0.8e-4;
    int grid_n = 512;
    Theorem1Variant variant = Theorem1Variant::mu_variant;
    double adjacency = 0.8;
    double eps_max = 2.5;
    double eps_step = 0.01;
    double xi_step = 0.01;
    /// When true the scenario's layout is replaced by the closed form.
    bool use_theorem1 = true;
};

struct ModemParams {
    int subcarriers = 32;
    double bias_sigma = 3.0;
    bool clipping = false;
    std::uint64_t num_bits = 200000;
    Sweep ebn0_db{120.0, 160.0, 1.0};
    Sweep ebn0_db_directional{50.0, 90.0, 1.0};
    int frames_per_block = 64;
};

struct SensingParams {
    double eta = 1.0;
    int trials = 1000;
    Sweep snr_db{190.0, 250.0, 2.0};
    Sweep snr_db_directional{140.0, 200.0, 2.0};
};

struct OpticsParams {
    double lambda0 = 450e-9;
    double fwhm = 20e-9;
    double support_fwhm = 3.0;
    double n0 = 1.4;
    bool cauchy = false;
    double cauchy_b = 0.0;  // m^2
    AodForm form = AodForm::appendix;
    double sweep_phi_max = 0.3;
    int sweep_points = 61;
    double lambda_sweep = 420e-9;
    int pattern_points = 181;
};

struct ExperimentParams {
    Vec3 device{0.4, 0.3, 0.0};
    double target_size = 0.5;
    int map_grid_n = 100;
    int metric_grid_n = 25;
    double map_ebn0_db = 148.0;
    double map_snr_db = 225.0;
    int map_trials = 200;
    int concentration_grid_n = 500;
    double aim_error = 0.01;
    double ber_target = 1e-4;
    double mse_target = 1e-4;
    double ebn0_search_lo = 0.0;
    double ebn0_search_hi = 250.0;
    double snr_search_lo = 100.0;
    double snr_search_hi = 400.0;
    double bisection_tol_db = 0.01;
};

struct Config {
    Scenario scenario = Scenario::table2();
    LayoutParams layout;
    ModemParams modem;
    SensingParams sensing;
    OpticsParams optics;
    ExperimentParams experiment;

    Spectrum spectrum() const;
    Dispersion dispersion() const;
};

/// Defaults, with the closed-form layout applied to the scenario.
Config default_config();

/// Parse a YAML config; missing keys keep their defaults. Unknown keys and
/// invalid values raise ConfigError with the offending key and line.
Config load_config(const std::string& path);
Config parse_config(const std::string& text);

/// Applies the closed-form layout when layout.use_theorem1 is set, then
/// validates the scenario (DomainError becomes ConfigError).
void finalize(Config& cfg);

}  // namespace oisac
