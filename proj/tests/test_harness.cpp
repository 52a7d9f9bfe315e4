#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "oisac/config.hpp"
#include "oisac/error.hpp"
#include "oisac/harness.hpp"
#include "oisac/layout.hpp"

using namespace oisac;
namespace fs = std::filesystem;

namespace {

Config small_config() {
    Config c = parse_config(R"(
layout:
  grid_n: 64
  eps_step: 0.25
  xi_step: 0.3
modem:
  num_bits: 10000
  ebn0_db: [140, 150, 5]
  ebn0_db_directional: [60, 70, 5]
sensing:
  trials: 100
  snr_db: [270, 280, 10]
  snr_db_directional: [230, 240, 10]
optics:
  sweep_points: 11
  pattern_points: 21
experiment:
  map_grid_n: 16
  metric_grid_n: 4
  map_trials: 100
  concentration_grid_n: 100
)");
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> run_all(const fs::path& dir, Exec exec, int threads) {
    omp_set_num_threads(threads);
    fs::remove_all(dir);
    RunContext ctx{small_config(), 42, dir, exec};
    experiment_coverage(ctx);
    LayoutOptions lo;
    lo.surface_out = dir / "surface.csv";
    experiment_layout(ctx, lo);
    experiment_ber(ctx);
    experiment_mse(ctx);
    experiment_lens(ctx, {});
    experiment_intensity(ctx);
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
    const Config d = default_config();
    CHECK(d.scenario.num_oaps == 4);
    CHECK(d.scenario.room_w == 5.0);
    CHECK(d.modem.subcarriers == 32);
    CHECK(d.modem.num_bits == 200000);
    CHECK(d.sensing.trials == 1000);
    const Config c = parse_config("scenario:\n  num_oaps: 3\n  layout_radius: 1.0\n  layout_angles_deg: [0, 120, 240]\n  focal_length: [0.04, 0.06]\n");
    CHECK(c.scenario.num_oaps == 3);
    CHECK(c.scenario.layout_radius == 1.0);
    CHECK(c.scenario.layout_angles[1] == doctest::Approx(2 * kPi / 3));
    CHECK(c.scenario.focal_x == 0.04);
    CHECK(c.scenario.focal_y == 0.06);
    // closed-form layout follows num_oaps
    const Config t = parse_config("scenario:\n  num_oaps: 5\n");
    CHECK(t.scenario.layout_angles.size() == 5);
    CHECK(t.scenario.layout_radius ==
          theorem1_layout(t.scenario, t.layout.rho_i, 5, Theorem1Variant::mu_variant).eps);
}

TEST_CASE("config errors name the key and line") {
    try {
        parse_config("scenario:\n  room_w: 5\n  room_z: 3\n");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "scenario.room_z");
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("config:3") == 0);
    }
    try {
        parse_config("modem:\n  subcarriers: 24\n");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "modem.subcarriers");
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_config("bogus: 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario:\n  reflectance: 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario:\n  layout_radius: 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario: [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("bisection") {
    auto f = [](double x) { return std::pow(10.0, -x / 10.0); };
    const double x = bisect_db(f, 1e-4, 0.0, 100.0, 0.01);
    CHECK(x == doctest::Approx(40.0).epsilon(0.01 / 40.0));
    CHECK(f(x) <= 1e-4);
    CHECK(f(x - 0.01) > 1e-4);
    CHECK_THROWS_AS(bisect_db(f, 1e-4, 0.0, 20.0, 0.01), NotBracketedError);
    CHECK_THROWS_AS(bisect_db(f, 1e-4, 50.0, 100.0, 0.01), NotBracketedError);
}

TEST_CASE("phase 1 area fraction matches the layout module") {
    const Config c = small_config();
    const auto p = run_phase1(c, c.scenario, 1);
    CHECK(p.area_fraction ==
          area_fraction(c.scenario, RadiationPattern::lambertian(c.scenario.semi_angle), c.layout.rho_i, c.layout.grid_n));
    for (double b : p.ber) CHECK(b >= 0.0);
}

TEST_CASE("wide layouts show one intensity peak per source") {
    // at the closed-form radius the four lobes merge; they separate beyond ~2.2 m
    Config c = small_config();
    c.experiment.map_grid_n = 40;
    const Scenario wide = c.scenario.with_layout(3.0, uniform_angles(4, kPi / 4));
    const auto p = run_phase1(c, wide, 1);
    const auto& g = p.grid;
    const double center = p.intensity[static_cast<std::size_t>(g.ny / 2) * g.nx + g.nx / 2];
    for (const auto& o : wide.oap_positions()) {
        double best = 0.0;
        Vec3 at = Vec3::Zero();
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (g.x(i) * o.x() <= 0.0 || g.y(j) * o.y() <= 0.0) continue;
                const double v = p.intensity[static_cast<std::size_t>(j) * g.nx + i];
                if (v > best) {
                    best = v;
                    at = Vec3(g.x(i), g.y(j), 0.0);
                }
            }
        CHECK(best > center);
        CHECK((at - Vec3(o.x(), o.y(), 0.0)).norm() < 0.6);
    }
}

TEST_CASE("phase 1 BER map is zero without noise") {
    Config c = small_config();
    c.experiment.map_ebn0_db = INFINITY;
    const auto p = run_phase1(c, c.scenario, 1);
    for (double b : p.ber) CHECK(b == 0.0);
}

TEST_CASE("phase 2 concentrates light on the target") {
    const Config c = small_config();
    const Vec3 t(0.4, 0.3, 0.0);
    const auto p = run_phase2(c, t);
    CHECK(p.intensity_directional > 10 * p.intensity_directionless);
    CHECK(p.concentration_phase2 > p.concentration_phase1);
    CHECK(std::abs(p.concentration_misaimed - p.concentration_phase2) < 0.01);
}

TEST_CASE("experiments are byte-identical across runs, policies and thread counts") {
    const fs::path base = fs::temp_directory_path() / "oisac_determinism";
    const auto a = run_all(base / "a", Exec::parallel, 4);
    const auto b = run_all(base / "b", Exec::parallel, 4);
    const auto c = run_all(base / "c", Exec::parallel, 1);
    const auto d = run_all(base / "d", Exec::serial, 1);
    REQUIRE(a.size() >= 15);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a == d);
    for (const auto& [name, text] : a) {
        CHECK(text.find('\n') != std::string::npos);
        CHECK(text.find(';') == std::string::npos);
    }
    CHECK(a.at("ber.csv").rfind("ebn0_db,ber,num_bits,num_errors,config_id\n", 0) == 0);
    CHECK(a.at("surface.csv").rfind("eps,xi0,fraction\n", 0) == 0);
    CHECK(a.at("lens_sweep.csv").rfind("phi_rad,aod_exact,aod_approx\n", 0) == 0);
    CHECK(a.at("pattern.csv").rfind("phi_rad,r_lambertian,r_beamformed\n", 0) == 0);
    CHECK(a.at("mse_directional.csv").rfind("x,y,z,sigma_i,trials,mse\n", 0) == 0);
    CHECK(a.at("coverage_intensity_area.csv").rfind("x,y,intensity\n", 0) == 0);
    fs::remove_all(base);
}

TEST_CASE("different seeds change Monte Carlo output") {
    const fs::path base = fs::temp_directory_path() / "oisac_seeds";
    fs::remove_all(base);
    RunContext a{small_config(), 1, base / "a", Exec::parallel};
    RunContext b{small_config(), 2, base / "b", Exec::parallel};
    experiment_mse(a);
    experiment_mse(b);
    CHECK(slurp(base / "a" / "mse_directionless.csv") != slurp(base / "b" / "mse_directionless.csv"));
    fs::remove_all(base);
}
