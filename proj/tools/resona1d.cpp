#include <CLI11.hpp>

#include <iostream>

#include "resona1d/cli.hpp"
#include "resona1d/errors.hpp"

int main(int argc, char** argv) {
    using namespace resona1d;

    CLI::App app{"Band structures of time-modulated one-dimensional resonator chains"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string method;
    std::string out_dir = ".";
    std::size_t grid = 0;
    int K = 0;

    const char* commands[][2] = {
        {"static-bands", "static capacitance bands (CSV)"},
        {"bands", "band structure with the selected method (CSV)"},
        {"exact", "exact quasifrequencies by Muller's method (CSV)"},
        {"compare", "exact versus capacitance error err_abs (JSON)"},
        {"gaps", "band gaps, k-gaps and reciprocity (JSON)"},
        {"perturbation", "first-order splitting at degenerate points (JSON)"},
        {"bench", "runtime against K and N (CSV)"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--method", method, "static, floquet, exact or perturbative")
            ->check(CLI::IsMember({"static", "floquet", "exact", "perturbative"}));
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--grid", grid, "number of alpha points (odd)");
        sub->add_option("--k", K, "truncation parameter K");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    CommandOptions options;
    options.out_dir = out_dir;
    RunConfig config;
    try {
        if (!method.empty()) options.method = parse_method(method);
        if (grid != 0) options.grid = grid;
        if (K != 0) options.K = K;
        config = apply_overrides(parse_config(config_path), options);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run_command(command, config, options, std::cout, std::cerr);
}
