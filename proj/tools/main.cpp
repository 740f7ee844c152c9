#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "isde/errors.hpp"
#include "isde/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Drift implicit Euler schemes for one-dimensional SDEs under the Lamperti "
                 "transform, with a coupled-path strong-convergence harness"};
    app.require_subcommand(1);

    std::string config_file;
    std::uint64_t seed = 0;
    long paths = 0;
    std::string out_dir;
    int workers = -1;

    CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_file, "config file (flat TOML-style)")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override the master seed");
    CLI::Option* paths_opt = run->add_option("--paths", paths, "override the Monte Carlo path count");
    CLI::Option* out_opt = run->add_option("--out-dir", out_dir, "override the output directory");
    CLI::Option* workers_opt =
        run->add_option("--workers", workers, "override the worker count (0 = all cores)");

    CLI::App* list = app.add_subcommand("presets", "list the shipped parameter sets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            isde::print_presets(std::cout);
            return 0;
        }
        isde::ExperimentConfig config = isde::load_config(config_file);
        if (*seed_opt)
            config.seed = seed;
        if (*paths_opt)
            config.paths = paths;
        if (*out_opt)
            config.out_dir = out_dir;
        if (*workers_opt)
            config.workers = workers;
        isde::run_experiment(config, std::cout);
        return 0;
    } catch (const isde::ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const isde::ParameterError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    } catch (const isde::SolverError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 4;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
