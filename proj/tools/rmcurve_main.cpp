#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rmcurve/cli.hpp"
#include "rmcurve/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis, time evolution and universality checks "
                 "of the Gaussian matrix model with external source"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (or a summary.json echo)")
            ->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        std::uint64_t* slot = nullptr;
        (void)slot;
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { seed = v; }, "override sampling.seed");
    };

    for (const char* name : {"analyze", "evolve", "sample", "verify-bulk", "verify-edge",
                             "rh-check"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);

    std::string command = app.get_subcommands().front()->get_name();
    try {
        auto config = rmcurve::cli::load_config(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (seed) config.seed = *seed;
        return rmcurve::cli::run(command, config);
    } catch (const rmcurve::Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
