#include "oisac/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "oisac/error.hpp"

namespace oisac {

std::vector<double> Sweep::values() const {
    if (!(step > 0.0) || stop < start) throw DomainError("sweep: need step > 0 and stop >= start");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop + 1e-9 * step) break;
        out.push_back(v);
    }
    return out;
}

Spectrum Config::spectrum() const {
    return Spectrum::gaussian(optics.lambda0, optics.fwhm, optics.support_fwhm);
}

Dispersion Config::dispersion() const {
    if (optics.cauchy) {
        const double a = optics.n0 - optics.cauchy_b / (optics.lambda0 * optics.lambda0);
        return Dispersion::cauchy(a, optics.cauchy_b, optics.lambda0);
    }
    return Dispersion::inverse(optics.n0, optics.lambda0);
}

void finalize(Config& cfg) {
    try {
        if (cfg.layout.use_theorem1) {
            const auto t = theorem1_layout(cfg.scenario, cfg.layout.rho_i, cfg.scenario.num_oaps,
                                           cfg.layout.variant, cfg.layout.adjacency);
            if (!t.in_room)
                throw ConfigError("layout_radius", 0,
                                  "closed-form radius lies outside the room; set it explicitly");
            cfg.scenario = cfg.scenario.with_layout(t.eps, t.angles);
        }
        cfg.scenario.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("", 0, e.what());
    }
}

Config default_config() {
    Config cfg;
    finalize(cfg);
    return cfg;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <class T>
T as(const YAML::Node& n, const std::string& key) {
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(key, line_of(n), "invalid value");
    }
}

double positive(const YAML::Node& n, const std::string& key) {
    const double v = as<double>(n, key);
    if (!(v > 0.0)) throw ConfigError(key, line_of(n), "must be positive");
    return v;
}

Sweep sweep(const YAML::Node& n, const std::string& key) {
    if (!n.IsSequence() || n.size() != 3)
        throw ConfigError(key, line_of(n), "expected [start, stop, step]");
    Sweep s{as<double>(n[0], key), as<double>(n[1], key), as<double>(n[2], key)};
    if (!(s.step > 0.0) || s.stop < s.start) throw ConfigError(key, line_of(n), "need step > 0 and stop >= start");
    return s;
}

using Handler = std::function<void(const YAML::Node&, const std::string&)>;

void section(const YAML::Node& node, const std::string& name,
             const std::map<std::string, Handler>& handlers) {
    if (!node.IsMap()) throw ConfigError(name, line_of(node), "expected a mapping");
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        const std::string path = name.empty() ? key : name + "." + key;
        const auto it = handlers.find(key);
        if (it == handlers.end()) throw ConfigError(path, line_of(kv.first), "unknown key");
        it->second(kv.second, path);
    }
}

}  // namespace

Config parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("", e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
    }
    Config cfg;
    if (root.IsNull()) {
        finalize(cfg);
        return cfg;
    }
    Scenario& s = cfg.scenario;
    bool radius_set = false;
    bool angles_set = false;

    const std::map<std::string, Handler> scenario{
        {"room_w", [&](auto& n, auto& k) { s.room_w = positive(n, k); }},
        {"room_l", [&](auto& n, auto& k) { s.room_l = positive(n, k); }},
        {"room_h", [&](auto& n, auto& k) { s.room_h = positive(n, k); }},
        {"num_oaps", [&](auto& n, auto& k) {
             s.num_oaps = as<int>(n, k);
             if (s.num_oaps < 1) throw ConfigError(k, line_of(n), "must be >= 1");
         }},
        {"layout_radius", [&](auto& n, auto& k) {
             if (n.IsScalar() && n.Scalar() == "theorem1") return;
             s.layout_radius = as<double>(n, k);
             radius_set = true;
         }},
        {"layout_angles_deg", [&](auto& n, auto& k) {
             if (n.IsScalar() && n.Scalar() == "theorem1") return;
             if (!n.IsSequence()) throw ConfigError(k, line_of(n), "expected a list of angles");
             s.layout_angles.clear();
             for (const auto& a : n) s.layout_angles.push_back(wrap_angle(deg2rad(as<double>(a, k))));
             angles_set = true;
         }},
        {"pd_count", [&](auto& n, auto& k) { s.pd_count = as<int>(n, k); }},
        {"pd_spacing", [&](auto& n, auto& k) { s.pd_spacing = as<double>(n, k); }},
        {"pd_area", [&](auto& n, auto& k) { s.pd_area = positive(n, k); }},
        {"semi_angle_deg", [&](auto& n, auto& k) { s.semi_angle = deg2rad(positive(n, k)); }},
        {"fov_deg", [&](auto& n, auto& k) { s.fov = deg2rad(positive(n, k)); }},
        {"reflectance", [&](auto& n, auto& k) { s.reflectance = as<double>(n, k); }},
        {"focal_length", [&](auto& n, auto& k) {
             if (n.IsSequence() && n.size() == 2) {
                 s.focal_x = positive(n[0], k);
                 s.focal_y = positive(n[1], k);
             } else {
                 s.focal_x = s.focal_y = positive(n, k);
             }
         }},
        {"coverage_area", [&](auto& n, auto& k) { s.coverage_area = positive(n, k); }},
        {"sample_rate", [&](auto& n, auto& k) { s.sample_rate = positive(n, k); }},
    };

    LayoutParams& l = cfg.layout;
    const std::map<std::string, Handler> layout{
        {"rho_i", [&](auto& n, auto& k) { l.rho_i = as<double>(n, k); }},
        {"grid_n", [&](auto& n, auto& k) {
             l.grid_n = as<int>(n, k);
             if (l.grid_n < 64) throw ConfigError(k, line_of(n), "must be >= 64");
         }},
        {"variant", [&](auto& n, auto& k) {
             const auto v = as<std::string>(n, k);
             if (v == "literal") l.variant = Theorem1Variant::literal;
             else if (v == "mu_variant") l.variant = Theorem1Variant::mu_variant;
             else throw ConfigError(k, line_of(n), "expected literal or mu_variant");
         }},
        {"adjacency", [&](auto& n, auto& k) { l.adjacency = positive(n, k); }},
        {"eps_max", [&](auto& n, auto& k) { l.eps_max = positive(n, k); }},
        {"eps_step", [&](auto& n, auto& k) { l.eps_step = positive(n, k); }},
        {"xi_step", [&](auto& n, auto& k) { l.xi_step = positive(n, k); }},
    };

    ModemParams& m = cfg.modem;
    const std::map<std::string, Handler> modem{
        {"subcarriers", [&](auto& n, auto& k) {
             m.subcarriers = as<int>(n, k);
             if (m.subcarriers < 4 || (m.subcarriers & (m.subcarriers - 1))) throw ConfigError(k, line_of(n), "must be a power of two >= 4");
         }},
        {"bias_sigma", [&](auto& n, auto& k) { m.bias_sigma = as<double>(n, k); }},
        {"clipping", [&](auto& n, auto& k) { m.clipping = as<bool>(n, k); }},
        {"num_bits", [&](auto& n, auto& k) {
             m.num_bits = as<std::uint64_t>(n, k);
             if (m.num_bits < 10000) throw ConfigError(k, line_of(n), "must be >= 1e4");
         }},
        {"ebn0_db", [&](auto& n, auto& k) { m.ebn0_db = sweep(n, k); }},
        {"ebn0_db_directional", [&](auto& n, auto& k) { m.ebn0_db_directional = sweep(n, k); }},
        {"frames_per_block", [&](auto& n, auto& k) { m.frames_per_block = as<int>(n, k); }},
    };

    SensingParams& se = cfg.sensing;
    const std::map<std::string, Handler> sensing{
        {"eta", [&](auto& n, auto& k) { se.eta = positive(n, k); }},
        {"trials", [&](auto& n, auto& k) {
             se.trials = as<int>(n, k);
             if (se.trials < 100) throw ConfigError(k, line_of(n), "must be >= 100");
         }},
        {"snr_db", [&](auto& n, auto& k) { se.snr_db = sweep(n, k); }},
        {"snr_db_directional", [&](auto& n, auto& k) { se.snr_db_directional = sweep(n, k); }},
    };

    OpticsParams& o = cfg.optics;
    const std::map<std::string, Handler> optics{
        {"lambda0_nm", [&](auto& n, auto& k) { o.lambda0 = positive(n, k) * 1e-9; }},
        {"fwhm_nm", [&](auto& n, auto& k) { o.fwhm = positive(n, k) * 1e-9; }},
        {"support_fwhm", [&](auto& n, auto& k) { o.support_fwhm = positive(n, k); }},
        {"n0", [&](auto& n, auto& k) {
             o.n0 = as<double>(n, k);
             if (!(o.n0 > 1.0)) throw ConfigError(k, line_of(n), "must exceed 1");
         }},
        {"dispersion", [&](auto& n, auto& k) {
             const auto v = as<std::string>(n, k);
             if (v == "inverse") o.cauchy = false;
             else if (v == "cauchy") o.cauchy = true;
             else throw ConfigError(k, line_of(n), "expected inverse or cauchy");
         }},
        {"cauchy_b_nm2", [&](auto& n, auto& k) { o.cauchy_b = as<double>(n, k) * 1e-18; }},
        {"form", [&](auto& n, auto& k) {
             const auto v = as<std::string>(n, k);
             if (v == "appendix") o.form = AodForm::appendix;
             else if (v == "lemma") o.form = AodForm::lemma;
             else throw ConfigError(k, line_of(n), "expected appendix or lemma");
         }},
        {"sweep_phi_max", [&](auto& n, auto& k) { o.sweep_phi_max = positive(n, k); }},
        {"sweep_points", [&](auto& n, auto& k) { o.sweep_points = as<int>(n, k); }},
        {"lambda_sweep_nm", [&](auto& n, auto& k) { o.lambda_sweep = positive(n, k) * 1e-9; }},
        {"pattern_points", [&](auto& n, auto& k) { o.pattern_points = as<int>(n, k); }},
    };

    ExperimentParams& x = cfg.experiment;
    const std::map<std::string, Handler> experiment{
        {"device", [&](auto& n, auto& k) {
             if (!n.IsSequence() || n.size() != 3) throw ConfigError(k, line_of(n), "expected [x, y, z]");
             x.device = Vec3(as<double>(n[0], k), as<double>(n[1], k), as<double>(n[2], k));
         }},
        {"target_size", [&](auto& n, auto& k) { x.target_size = as<double>(n, k); }},
        {"map_grid_n", [&](auto& n, auto& k) { x.map_grid_n = as<int>(n, k); }},
        {"metric_grid_n", [&](auto& n, auto& k) { x.metric_grid_n = as<int>(n, k); }},
        {"map_ebn0_db", [&](auto& n, auto& k) { x.map_ebn0_db = as<double>(n, k); }},
        {"map_snr_db", [&](auto& n, auto& k) { x.map_snr_db = as<double>(n, k); }},
        {"map_trials", [&](auto& n, auto& k) { x.map_trials = as<int>(n, k); }},
        {"concentration_grid_n", [&](auto& n, auto& k) { x.concentration_grid_n = as<int>(n, k); }},
        {"aim_error", [&](auto& n, auto& k) { x.aim_error = as<double>(n, k); }},
        {"ber_target", [&](auto& n, auto& k) { x.ber_target = positive(n, k); }},
        {"mse_target", [&](auto& n, auto& k) { x.mse_target = positive(n, k); }},
        {"ebn0_search_db", [&](auto& n, auto& k) {
             if (!n.IsSequence() || n.size() != 2) throw ConfigError(k, line_of(n), "expected [lo, hi]");
             x.ebn0_search_lo = as<double>(n[0], k);
             x.ebn0_search_hi = as<double>(n[1], k);
         }},
        {"snr_search_db", [&](auto& n, auto& k) {
             if (!n.IsSequence() || n.size() != 2) throw ConfigError(k, line_of(n), "expected [lo, hi]");
             x.snr_search_lo = as<double>(n[0], k);
             x.snr_search_hi = as<double>(n[1], k);
         }},
        {"bisection_tol_db", [&](auto& n, auto& k) { x.bisection_tol_db = positive(n, k); }},
    };

    section(root, "", {
        {"scenario", [&](auto& n, auto&) { section(n, "scenario", scenario); }},
        {"layout", [&](auto& n, auto&) { section(n, "layout", layout); }},
        {"modem", [&](auto& n, auto&) { section(n, "modem", modem); }},
        {"sensing", [&](auto& n, auto&) { section(n, "sensing", sensing); }},
        {"optics", [&](auto& n, auto&) { section(n, "optics", optics); }},
        {"experiment", [&](auto& n, auto&) { section(n, "experiment", experiment); }},
    });

    if (radius_set != angles_set)
        throw ConfigError("scenario.layout_radius", 0,
                          "layout_radius and layout_angles_deg must both be given or both be theorem1");
    if (angles_set) {
        if (static_cast<int>(s.layout_angles.size()) != s.num_oaps)
            throw ConfigError("scenario.layout_angles_deg", 0, "needs num_oaps entries");
        l.use_theorem1 = false;
    } else {
        s.layout_angles = uniform_angles(s.num_oaps, kPi / 4.0);
    }
    finalize(cfg);
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace oisac
