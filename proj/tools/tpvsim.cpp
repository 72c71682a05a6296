#include "tpv/pipeline.hpp"
#include "tpv/presets.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

using namespace tpv::cli;

namespace {

int report(const RunSummary& s, bool fail_on_any) {
    for (const auto& f : s.files) std::cout << "wrote " << f << "\n";
    for (const auto& e : s.errors) std::cerr << "failed " << e << "\n";
    std::cout << s.rows << " rows, " << s.failures << " failed\n";
    if (s.rows > 0 && s.failures == s.rows) return 2;
    if (fail_on_any && s.failures > 0) return 2;
    return 0;
}

}

int main(int argc, char** argv) {
    CLI::App app{"tpvsim: thermophotovoltaic system simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("tpvsim ") + TPV_VERSION);

    std::string out_dir;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::size_t grid_points = 0;
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory (default: config output.dir, $TPVSIM_OUT_DIR, ./tpvsim_out)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--grid-points", grid_points, "wavelength grid nodes")->check(CLI::Range(2, 1000000));
    };

    std::string preset_name;
    auto* preset = app.add_subcommand("preset", "run a built-in figure preset");
    preset->add_option("name", preset_name, "preset name")->required();
    std::string override_path;
    preset->add_option("--config", override_path, "JSON overrides merged over the preset");
    add_run_flags(preset);

    std::string sweep_path;
    auto* sweep = app.add_subcommand("sweep", "run the sweep described by a JSON config");
    sweep->add_option("config", sweep_path, "config file")->required();
    add_run_flags(sweep);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a JSON config without running it");
    validate->add_option("config", validate_path, "config file")->required();

    auto* list = app.add_subcommand("list-presets", "list built-in presets");

    CLI11_PARSE(app, argc, argv);

    RunOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    if (grid_points) opt.grid_points = grid_points;

    try {
        if (*list) {
            for (const auto& p : presets()) std::cout << p.name << "\t" << p.description << "\n";
            return 0;
        }
        if (*validate) {
            auto rep = validate_config(load_config_file(validate_path));
            std::cout << rep.format();
            return rep.ok() ? 0 : 1;
        }
        if (*preset) {
            json cfg = find_preset(preset_name).config;
            if (!override_path.empty()) cfg.merge_patch(load_config_file(override_path));
            return report(run_and_write(cfg, opt), true);
        }
        if (*sweep) return report(run_and_write(load_config_file(sweep_path), opt), false);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
