#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "isde/config.hpp"

namespace isde {

struct ExperimentArtifacts {
    ErrorTable table;
    OrderFit fit;
    std::filesystem::path errors_csv;
    std::filesystem::path fit_json;
};

/// Run the configured study end to end: build the process spec, check step
/// admissibility for the coarsest ladder entry, estimate the error ladder,
/// fit the convergence order, write errors.csv and fit.json under
/// config.out_dir and print a summary table to `log`.
ExperimentArtifacts run_experiment(const ExperimentConfig& config, std::ostream& log);

struct Preset {
    std::string name;
    std::string regime;
    ExperimentConfig config;
};

/// Shipped parameter sets, one per convergence regime.
const std::vector<Preset>& presets();

void print_presets(std::ostream& out);

} // namespace isde
