#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "oisac/config.hpp"
#include "oisac/error.hpp"
#include "oisac/harness.hpp"

namespace {

struct Common {
    std::string config;
    std::uint64_t seed = 1;
    std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "YAML config file (defaults when omitted)");
    cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--out", c.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optical ISAC simulator"};
    app.require_subcommand(1);
    Common common;

    const char* names[] = {"coverage", "ber", "mse", "intensity", "required-power"};
    for (const char* n : names) add_common(app.add_subcommand(n), common);

    auto* layout = app.add_subcommand("layout", "closed-form layout vs grid search");
    add_common(layout, common);
    std::optional<double> rho_i;
    std::optional<int> mu;
    std::optional<int> grid_n;
    std::optional<std::string> variant;
    std::optional<std::string> surface_out;
    layout->add_option("--rho-i", rho_i, "intensity threshold");
    layout->add_option("--mu", mu, "number of sources");
    layout->add_option("--grid-n", grid_n, "floor grid side");
    layout->add_option("--variant", variant, "closed-form variant")->check(CLI::IsMember({"literal", "mu"}));
    layout->add_option("--search-surface-out", surface_out, "CSV of the search surface");

    auto* lens = app.add_subcommand("lens", "lens sweep and radiation pattern");
    add_common(lens, common);
    std::optional<double> lambda0_nm;
    std::optional<double> fwhm_nm;
    std::optional<double> n0;
    std::optional<std::string> form;
    std::optional<std::string> sweep_out;
    lens->add_option("--lambda0-nm", lambda0_nm, "design wavelength");
    lens->add_option("--fwhm-nm", fwhm_nm, "spectrum FWHM");
    lens->add_option("--n0", n0, "refractive index at the design wavelength");
    lens->add_option("--form", form, "approximation form")->check(CLI::IsMember({"lemma", "appendix"}));
    lens->add_option("--sweep-out", sweep_out, "CSV of the AoD sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        oisac::RunContext ctx;
        ctx.cfg = common.config.empty() ? oisac::default_config() : oisac::load_config(common.config);
        ctx.seed = common.seed;
        ctx.out = common.out;
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "coverage") {
            oisac::experiment_coverage(ctx);
        } else if (cmd == "layout") {
            oisac::LayoutOptions o;
            o.rho_i = rho_i;
            o.mu = mu;
            o.grid_n = grid_n;
            if (variant)
                o.variant = *variant == "literal" ? oisac::Theorem1Variant::literal
                                                  : oisac::Theorem1Variant::mu_variant;
            if (surface_out) o.surface_out = *surface_out;
            oisac::experiment_layout(ctx, o);
        } else if (cmd == "ber") {
            oisac::experiment_ber(ctx);
        } else if (cmd == "mse") {
            oisac::experiment_mse(ctx);
        } else if (cmd == "lens") {
            auto& o = ctx.cfg.optics;
            if (lambda0_nm) o.lambda0 = *lambda0_nm * 1e-9;
            if (fwhm_nm) o.fwhm = *fwhm_nm * 1e-9;
            if (n0) o.n0 = *n0;
            if (form) o.form = *form == "lemma" ? oisac::AodForm::lemma : oisac::AodForm::appendix;
            if (!(o.lambda0 > 0.0)) throw oisac::ConfigError("--lambda0-nm", 0, "must be > 0");
            if (!(o.fwhm > 0.0)) throw oisac::ConfigError("--fwhm-nm", 0, "must be > 0");
            if (!(o.n0 > 1.0)) throw oisac::ConfigError("--n0", 0, "must be > 1");
            oisac::LensOptions lo;
            if (sweep_out) lo.sweep_out = *sweep_out;
            oisac::experiment_lens(ctx, lo);
        } else if (cmd == "intensity") {
            oisac::experiment_intensity(ctx);
        } else {
            oisac::experiment_required_power(ctx);
        }
    } catch (const oisac::ConfigError& e) {
        std::cerr << "oisac: " << e.what() << '\n';
        return 2;
    } catch (const oisac::Error& e) {
        std::cerr << "oisac: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
