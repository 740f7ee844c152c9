#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "isde/analysis.hpp"
#include "isde/processes.hpp"

namespace isde {

enum class ProcessFamily { Cir, Cev, LampertiBuiltin, ConstantDiffusion };

std::string family_name(ProcessFamily family);
ProcessFamily family_from_name(const std::string& name);

/// Built-in Lamperti example: sigma(x) = sigma_base + sigma_amp cos(x),
/// b(x) = b0 - b1 x.  The transform is realized by quadrature.
struct LampertiBuiltinParams {
    double sigma_base = 2.0;
    double sigma_amp = 1.0;
    double b0 = 0.0;
    double b1 = 1.0;
    double x0 = 1.0;
};

/// sigma(x) = sigma0, b(x) = -lambda x.
struct ConstantDiffusionParams {
    double sigma0 = 2.0;
    double lambda = 1.0;
    double x0 = 1.0;
};

/// One batch experiment, as described by a config file: process family and
/// parameters, horizon, ladder of coarse step counts, reference multiplier,
/// Monte Carlo size, moment order, seed, solver tolerance, output directory
/// and worker count.
struct ExperimentConfig {
    ProcessFamily family = ProcessFamily::Cir;
    CirParams cir{};
    CevParams cev{};
    LampertiBuiltinParams lamperti{};
    ConstantDiffusionParams constant{};

    double horizon = 1.0;
    std::vector<long> ladder = {8, 16, 32, 64, 128, 256};
    long ref_multiplier = 128; ///< n_ref = ref_multiplier * max(ladder)
    long paths = 10000;
    double p = 1.0;
    std::uint64_t seed = 0;
    double tol = 1e-12;
    std::string solver = "auto"; ///< auto | closed-form | root-find
    std::string out_dir = ".";
    int workers = 0;

    long reference_steps() const;
};

/// Parse the flat TOML-style config format (key = value lines, one optional
/// [params] block).  Throws ConfigError on malformed input.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Build the process spec for the configured family.
/// Throws ParameterError when the family's admissibility conditions fail.
ProcessSpec build_spec(const ExperimentConfig& config);

/// Resolve the experiment into Monte Carlo study settings.
StudyConfig to_study(const ExperimentConfig& config);

} // namespace isde
