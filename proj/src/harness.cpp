#include "oisac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "oisac/csv.hpp"
#include "oisac/error.hpp"
#include "oisac/layout.hpp"
#include "oisac/optics.hpp"
#include "oisac/rng.hpp"

namespace oisac {

RadiationPattern make_beamformed(const Config& cfg) {
    return RadiationPattern::beamformed(
        std::make_shared<BeamformedPattern>(cfg.spectrum(), cfg.optics.n0, cfg.scenario.semi_angle));
}

std::vector<SystemVariant> system_variants(const Config& cfg, const Vec3& target) {
    const auto lambert = RadiationPattern::lambertian(cfg.scenario.semi_angle);
    return {
        {"directionless", lambert, Aiming::vertical(), Constellation::bpsk, 1.0},
        {"separate", lambert, Aiming::vertical(), Constellation::bpsk, 0.5},
        {"directional", make_beamformed(cfg), Aiming::at(target), Constellation::qam16, 1.0},
    };
}

namespace {

BerSetup ber_setup(const Config& cfg, const SystemVariant& v, std::uint64_t seed) {
    BerSetup b;
    b.ofdm.subcarriers = cfg.modem.subcarriers;
    b.ofdm.bias_sigma = cfg.modem.bias_sigma;
    b.ofdm.clipping = cfg.modem.clipping;
    b.ofdm.constellation = v.constellation;
    b.num_bits = cfg.modem.num_bits;
    b.seed = seed;
    b.power_scale = v.power_scale;
    b.frames_per_block = cfg.modem.frames_per_block;
    return b;
}

MseSetup mse_setup(const Config& cfg, const SystemVariant& v, std::uint64_t seed, int trials) {
    MseSetup m;
    m.eta = cfg.sensing.eta;
    m.trials = trials;
    m.seed = seed;
    m.power_scale = v.power_scale;
    return m;
}

double sigma_from_snr(double snr_db) { return std::pow(10.0, -snr_db / 20.0); }

CMatrix response(const Config& cfg, const Scenario& s, const SystemVariant& v, const Vec3& device) {
    return subcarrier_response(compute_channel(s, v.pattern, device, v.aiming), cfg.modem.subcarriers,
                               s.sample_rate);
}

Csv intensity_csv(const FloorGrid& g, const std::vector<double>& map) {
    Csv csv({"x", "y", "intensity"});
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            csv.add({fmt(g.x(i)), fmt(g.y(j)), fmt(map[static_cast<std::size_t>(j) * g.nx + i])});
    return csv;
}

// Stream ids keep the Monte Carlo draws of different experiments apart.
enum Stream : std::uint64_t { kPhase1Map = 11, kBer = 21, kMse = 31, kRequired = 41 };

}  // namespace

Phase1Output run_phase1(const Config& cfg, const Scenario& layout, std::uint64_t seed, Exec exec) {
    Phase1Output out;
    const auto lambert = RadiationPattern::lambertian(layout.semi_angle);
    out.grid = FloorGrid::of(layout, cfg.experiment.map_grid_n, 0.0);
    out.intensity = intensity_map(layout, lambert, Aiming::vertical(), out.grid, layout.pd_area, exec);
    out.area_fraction = area_fraction(layout, lambert, cfg.layout.rho_i, cfg.layout.grid_n, exec);

    out.metric_grid = FloorGrid::of(layout, cfg.experiment.metric_grid_n, 0.0);
    const auto& g = out.metric_grid;
    out.ber.assign(g.size(), 0.0);
    out.mse.assign(g.size(), 0.0);
    SystemVariant v{"directionless", lambert, Aiming::vertical(), Constellation::bpsk, 1.0};
    const double sigma = sigma_from_snr(cfg.experiment.map_snr_db);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
            const Vec3 p(g.x(i), g.y(j), g.z);
            const CMatrix h = response(cfg, layout, v, p);
            out.ber[idx] = h.cwiseAbs2().maxCoeff() > 0.0
                               ? bpsk_ber_oracle(h, cfg.experiment.map_ebn0_db)
                               : 0.5;
            MseSetup ms = mse_setup(cfg, v, splitmix64(seed ^ kPhase1Map) + idx, cfg.experiment.map_trials);
            try {
                out.mse[idx] = run_mse(layout, lambert, p, v.aiming, ms, {sigma}, exec).front().mse;
            } catch (const InsufficientIlluminationError&) {
                out.mse[idx] = std::numeric_limits<double>::infinity();
            } catch (const RankDeficiencyError&) {
                out.mse[idx] = std::numeric_limits<double>::infinity();
            }
        }
    }
    return out;
}

Phase2Output run_phase2(const Config& cfg, const Vec3& target, Exec exec) {
    const Scenario& s = cfg.scenario;
    Phase2Output out;
    out.target = target;
    const auto lambert = RadiationPattern::lambertian(s.semi_angle);
    const auto beam = make_beamformed(cfg);
    const Aiming aim = Aiming::at(target);
    out.intensity_directional = superposed_intensity(s, beam, target, aim, s.pd_area);
    out.intensity_directionless = superposed_intensity(s, lambert, target, Aiming::vertical(), s.pd_area);
    const int n = cfg.experiment.concentration_grid_n;
    const double size = cfg.experiment.target_size;
    out.concentration_phase1 = intensity_concentration(s, lambert, target, size, Aiming::vertical(), n);
    out.concentration_phase2 = intensity_concentration(s, beam, target, size, aim, n);
    const Vec3 off(cfg.experiment.aim_error, 0.0, 0.0);
    out.concentration_misaimed = intensity_concentration(s, beam, target, size, Aiming::at(target + off), n);
    out.intensity_misaimed = superposed_intensity(s, beam, target, Aiming::at(target + off), s.pd_area);
    out.grid = FloorGrid::of(s, cfg.experiment.map_grid_n, target.z());
    out.intensity = intensity_map(s, beam, aim, out.grid, out.grid.dx * out.grid.dy, exec);
    return out;
}

double bisect_db(const std::function<double(double)>& metric, double target, double lo, double hi,
                 double tol) {
    if (!(hi > lo) || !(tol > 0.0)) throw DomainError("bisection: need hi > lo and tol > 0");
    if (!(metric(lo) > target) || !(metric(hi) <= target))
        throw NotBracketedError("bisection: search range does not cross the target");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (metric(mid) > target ? lo : hi) = mid;
    }
    return hi;
}

std::vector<RequiredPower> run_required_power(const Config& cfg, std::uint64_t seed, Exec exec) {
    const Vec3 device = cfg.experiment.device;
    const auto& x = cfg.experiment;
    std::vector<RequiredPower> out;
    // One seed for every variant: common random numbers make the gaps between
    // variants insensitive to Monte Carlo noise.
    const std::uint64_t s = splitmix64(seed ^ kRequired);
    for (const auto& v : system_variants(cfg, device)) {
        RequiredPower r;
        r.id = v.id;
        const CMatrix h = response(cfg, cfg.scenario, v, device);
        const BerSetup b = ber_setup(cfg, v, s);
        r.ber_db = bisect_db(
            [&](double e) { return run_ber(h, b, {e}, exec).front().ber; }, x.ber_target,
            x.ebn0_search_lo, x.ebn0_search_hi, x.bisection_tol_db);
        const MseSetup m = mse_setup(cfg, v, s, cfg.sensing.trials);
        r.mse_db = bisect_db(
            [&](double snr) {
                return run_mse(cfg.scenario, v.pattern, device, v.aiming, m, {sigma_from_snr(snr)}, exec)
                    .front()
                    .mse;
            },
            x.mse_target, x.snr_search_lo, x.snr_search_hi, x.bisection_tol_db);
        out.push_back(r);
    }
    return out;
}

void experiment_coverage(const RunContext& ctx) {
    const Config& cfg = ctx.cfg;
    const Scenario& s = cfg.scenario;
    const int mu = s.num_oaps;
    const SearchRange eps{0.0, std::min(cfg.layout.eps_max, std::min(s.room_w, s.room_l)), 0.05, true};
    const SearchRange xi{0.0, kPi / 2, 0.05, false};
    const auto uni = uniformity_search_layout(s, mu, eps, xi, 128, ctx.exec);
    const Scenario uniform = s.with_layout(uni.eps, uniform_angles(mu, uni.xi0));

    Csv summary({"criterion", "eps", "xi0", "area_fraction", "ber_fraction", "mse_fraction"});
    const std::vector<std::pair<std::string, Scenario>> layouts{{"area", s}, {"uniformity", uniform}};
    for (const auto& [name, layout] : layouts) {
        const auto p1 = run_phase1(cfg, layout, ctx.seed, ctx.exec);
        intensity_csv(p1.grid, p1.intensity).save(ctx.out / ("coverage_intensity_" + name + ".csv"));
        Csv ber({"x", "y", "ber"});
        Csv mse({"x", "y", "z", "sigma_i", "trials", "mse"});
        const auto& g = p1.metric_grid;
        std::size_t ber_ok = 0;
        std::size_t mse_ok = 0;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
                ber.add({fmt(g.x(i)), fmt(g.y(j)), fmt(p1.ber[idx])});
                mse.add({fmt(g.x(i)), fmt(g.y(j)), fmt(g.z), fmt(sigma_from_snr(cfg.experiment.map_snr_db)),
                         fmt(cfg.experiment.map_trials), fmt(p1.mse[idx])});
                ber_ok += p1.ber[idx] <= cfg.experiment.ber_target;
                mse_ok += p1.mse[idx] <= cfg.experiment.mse_target;
            }
        }
        ber.save(ctx.out / ("coverage_ber_" + name + ".csv"));
        mse.save(ctx.out / ("coverage_mse_" + name + ".csv"));
        const double cells = static_cast<double>(g.size());
        summary.add({name, fmt(layout.layout_radius), fmt(layout.layout_angles.front()),
                     fmt(p1.area_fraction), fmt(static_cast<double>(ber_ok) / cells),
                     fmt(static_cast<double>(mse_ok) / cells)});
    }
    summary.save(ctx.out / "coverage_summary.csv");
}

void experiment_layout(const RunContext& ctx, const LayoutOptions& opt) {
    const Config& cfg = ctx.cfg;
    const Scenario& s = cfg.scenario;
    const int mu = opt.mu.value_or(s.num_oaps);
    const double rho = opt.rho_i.value_or(cfg.layout.rho_i);
    const int grid_n = opt.grid_n.value_or(cfg.layout.grid_n);
    if (mu < 1) throw ConfigError("--mu", 0, "must be >= 1");
    if (grid_n < 64) throw ConfigError("--grid-n", 0, "must be >= 64");
    const auto lambert = RadiationPattern::lambertian(s.semi_angle);

    Csv summary({"mu", "method", "eps", "xi0", "fraction"});
    std::vector<Theorem1Variant> variants{Theorem1Variant::literal, Theorem1Variant::mu_variant};
    if (opt.variant) variants = {*opt.variant};
    for (auto v : variants) {
        const auto t = theorem1_layout(s, rho, mu, v, cfg.layout.adjacency);
        const double f = area_fraction(s.with_layout(t.eps, t.angles), lambert, rho, grid_n, ctx.exec);
        summary.add({fmt(mu), v == Theorem1Variant::literal ? "theorem1_literal" : "theorem1_mu_variant",
                     fmt(t.eps), fmt(t.angles.front()), fmt(f)});
    }
    const SearchRange eps{0.0, cfg.layout.eps_max, cfg.layout.eps_step, true};
    const SearchRange xi{0.0, kPi / 2, cfg.layout.xi_step, false};
    const auto best = grid_search_layout(s, mu, rho, eps, xi, grid_n, ctx.exec);
    summary.add({fmt(mu), "grid_search", fmt(best.eps), fmt(best.xi0), fmt(best.value)});
    summary.save(ctx.out / "layout_summary.csv");
    if (opt.surface_out) {
        Csv surface({"eps", "xi0", "fraction"});
        for (const auto& p : best.surface) surface.add({fmt(p.eps), fmt(p.xi0), fmt(p.value)});
        surface.save(*opt.surface_out);
    }
}

void experiment_ber(const RunContext& ctx) {
    const Config& cfg = ctx.cfg;
    const Vec3 device = cfg.experiment.device;
    Csv csv({"ebn0_db", "ber", "num_bits", "num_errors", "config_id"});
    const std::uint64_t s = splitmix64(ctx.seed ^ kBer);
    for (const auto& v : system_variants(cfg, device)) {
        const auto sweep = v.id == "directional" ? cfg.modem.ebn0_db_directional : cfg.modem.ebn0_db;
        const CMatrix h = response(cfg, cfg.scenario, v, device);
        for (const auto& p : run_ber(h, ber_setup(cfg, v, s), sweep.values(), ctx.exec))
            csv.add({fmt(p.ebn0_db), fmt(p.ber), fmt(p.num_bits), fmt(p.num_errors), v.id});
    }
    csv.save(ctx.out / "ber.csv");
}

void experiment_mse(const RunContext& ctx) {
    const Config& cfg = ctx.cfg;
    const Vec3 device = cfg.experiment.device;
    const std::uint64_t s = splitmix64(ctx.seed ^ kMse);
    for (const auto& v : system_variants(cfg, device)) {
        const auto sweep = v.id == "directional" ? cfg.sensing.snr_db_directional : cfg.sensing.snr_db;
        std::vector<double> sigmas;
        for (double snr : sweep.values()) sigmas.push_back(sigma_from_snr(snr));
        Csv csv({"x", "y", "z", "sigma_i", "trials", "mse"});
        for (const auto& p : run_mse(cfg.scenario, v.pattern, device, v.aiming,
                                     mse_setup(cfg, v, s, cfg.sensing.trials), sigmas, ctx.exec))
            csv.add({fmt(p.target.x()), fmt(p.target.y()), fmt(p.target.z()), fmt(p.sigma_i),
                     fmt(p.trials), fmt(p.mse)});
        csv.save(ctx.out / ("mse_" + v.id + ".csv"));
    }
}

void experiment_lens(const RunContext& ctx, const LensOptions& opt) {
    const Config& cfg = ctx.cfg;
    const auto disp = cfg.dispersion();
    const auto& o = cfg.optics;
    if (o.sweep_points < 2 || o.pattern_points < 2) throw ConfigError("optics", 0, "need at least 2 sweep points");
    Csv sweep({"phi_rad", "aod_exact", "aod_approx"});
    for (int i = 0; i < o.sweep_points; ++i) {
        const double phi = -o.sweep_phi_max + 2.0 * o.sweep_phi_max * i / (o.sweep_points - 1);
        sweep.add({fmt(phi), fmt(trace_exact_aod(phi, o.lambda_sweep, disp)),
                   fmt(lemma2_aod_approx(phi, o.lambda_sweep, disp, o.form))});
    }
    sweep.save(opt.sweep_out.value_or(ctx.out / "lens_sweep.csv"));

    const auto lambert = RadiationPattern::lambertian(cfg.scenario.semi_angle);
    const auto beam = make_beamformed(cfg);
    const double top = cfg.scenario.semi_angle;
    const double h = top / (o.pattern_points - 1);
    Csv pattern({"phi_rad", "r_lambertian", "r_beamformed"});
    for (int i = 0; i < o.pattern_points; ++i) {
        const double phi = h * i;
        // Beamformed values are bin averages over [phi - h/2, phi + h/2].
        pattern.add({fmt(phi), fmt(lambert.evaluate(phi)), fmt(beam.evaluate(phi, 0.5 * h))});
    }
    pattern.save(ctx.out / "pattern.csv");
}

void experiment_intensity(const RunContext& ctx) {
    const Config& cfg = ctx.cfg;
    const Vec3 target = cfg.experiment.device;
    const auto p2 = run_phase2(cfg, target, ctx.exec);
    const Scenario& s = cfg.scenario;
    const FloorGrid g = FloorGrid::of(s, cfg.experiment.map_grid_n, target.z());
    const auto p1 = intensity_map(s, RadiationPattern::lambertian(s.semi_angle), Aiming::vertical(), g,
                                  g.dx * g.dy, ctx.exec);
    intensity_csv(g, p1).save(ctx.out / "intensity_phase1.csv");
    intensity_csv(p2.grid, p2.intensity).save(ctx.out / "intensity_phase2.csv");
    Csv c({"phase", "target_x", "target_y", "target_size", "fraction", "intensity_at_target"});
    const double size = cfg.experiment.target_size;
    c.add({"phase1", fmt(target.x()), fmt(target.y()), fmt(size), fmt(p2.concentration_phase1),
           fmt(p2.intensity_directionless)});
    c.add({"phase2", fmt(target.x()), fmt(target.y()), fmt(size), fmt(p2.concentration_phase2),
           fmt(p2.intensity_directional)});
    c.add({"phase2_misaimed", fmt(target.x()), fmt(target.y()), fmt(size), fmt(p2.concentration_misaimed),
           fmt(p2.intensity_misaimed)});
    c.save(ctx.out / "concentration.csv");
}

void experiment_required_power(const RunContext& ctx) {
    const auto req = run_required_power(ctx.cfg, ctx.seed, ctx.exec);
    Csv csv({"config_id", "metric", "target", "required_db"});
    for (const auto& r : req) {
        csv.add({r.id, "ber", fmt(ctx.cfg.experiment.ber_target), fmt(r.ber_db)});
        csv.add({r.id, "mse", fmt(ctx.cfg.experiment.mse_target), fmt(r.mse_db)});
    }
    csv.save(ctx.out / "required_power.csv");
    auto find = [&](const std::string& id) {
        return *std::find_if(req.begin(), req.end(), [&](const RequiredPower& r) { return r.id == id; });
    };
    const auto& dl = find("directionless");
    const auto& sep = find("separate");
    const auto& dir = find("directional");
    Csv gaps({"metric", "comparison", "gap_db"});
    gaps.add({"ber", "separate_minus_directionless", fmt(sep.ber_db - dl.ber_db)});
    gaps.add({"ber", "directionless_minus_directional", fmt(dl.ber_db - dir.ber_db)});
    gaps.add({"mse", "separate_minus_directionless", fmt(sep.mse_db - dl.mse_db)});
    gaps.add({"mse", "directionless_minus_directional", fmt(dl.mse_db - dir.mse_db)});
    gaps.save(ctx.out / "required_power_gaps.csv");
}

}  // namespace oisac
