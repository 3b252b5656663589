// chtx: regime classification, simulation, sweeps and interpolation audits
// for the attraction-repulsion chemotaxis system with nonlocal damping.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chtx/commands.hpp"
#include "chtx/number_format.hpp"

namespace {

chtx::SweepAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw chtx::ConfigError("--axis expects name=v1,v2,... (got '" + spec + "')");
    }
    chtx::SweepAxis axis;
    axis.name = spec.substr(0, eq);
    std::string rest = spec.substr(eq + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
        const auto comma = rest.find(',', start);
        const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        axis.values.push_back(chtx::parse_number(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return axis;
}

std::filesystem::path config_dir(const std::string& path) {
    return std::filesystem::path(path).parent_path();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chtx: attraction-repulsion chemotaxis with nonlocal logistic damping"};
    app.require_subcommand(1);

    std::string cfg_path;
    std::vector<std::string> axis_specs;
    bool classify_only = false;
    std::string out_dir;

    auto* check = app.add_subcommand("check-regime", "classify the parameter regime of a config");
    check->add_option("config", cfg_path, "config file")->required();
    auto* run = app.add_subcommand("run", "simulate and write diagnostics CSV and summary JSON");
    run->add_option("config", cfg_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    auto* sweep = app.add_subcommand("sweep", "classify (and optionally run) a 1-2 axis parameter grid");
    sweep->add_option("config", cfg_path, "config file")->required();
    sweep->add_option("--axis", axis_specs, "name=v1,v2,...")->take_all();
    sweep->add_flag("--classify-only", classify_only, "skip simulations");
    sweep->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    auto* audit = app.add_subcommand("audit", "print interpolation exponent tables and implied constants");
    audit->add_option("config", cfg_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? chtx::exit_code::ok : chtx::exit_code::failure;
    }

    try {
        chtx::RunConfig config = chtx::load_config(cfg_path);
        if (!out_dir.empty()) config.output.dir = out_dir;
        const auto base = config_dir(cfg_path);
        if (*check) return chtx::cmd_check_regime(config, std::cout);
        if (*run) return chtx::cmd_run(config, std::cout, base);
        if (*sweep) {
            std::vector<chtx::SweepAxis> axes;
            for (const auto& s : axis_specs) axes.push_back(parse_axis(s));
            return chtx::cmd_sweep(config, axes, classify_only, std::cout, base);
        }
        if (*audit) return chtx::cmd_audit(config, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "chtx: " << e.what() << "\n";
        return chtx::exit_code::failure;
    }
    return chtx::exit_code::failure;
}
