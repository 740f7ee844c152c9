#include "isde/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "isde/errors.hpp"

namespace isde {

namespace {

std::string solver_name(StepSolver solver) {
    return solver == StepSolver::ClosedForm ? "closed-form" : "root-find";
}

nlohmann::json params_json(const ExperimentConfig& config) {
    switch (config.family) {
    case ProcessFamily::Cir:
        return {{"a", config.cir.a},
                {"k", config.cir.k},
                {"sigma", config.cir.sigma},
                {"x0", config.cir.x0}};
    case ProcessFamily::Cev:
        return {{"a", config.cev.a},
                {"k", config.cev.k},
                {"sigma", config.cev.sigma},
                {"alpha", config.cev.alpha},
                {"x0", config.cev.x0}};
    case ProcessFamily::LampertiBuiltin:
        return {{"sigma_base", config.lamperti.sigma_base},
                {"sigma_amp", config.lamperti.sigma_amp},
                {"b0", config.lamperti.b0},
                {"b1", config.lamperti.b1},
                {"x0", config.lamperti.x0}};
    case ProcessFamily::ConstantDiffusion:
        return {{"sigma0", config.constant.sigma0},
                {"lambda", config.constant.lambda},
                {"x0", config.constant.x0}};
    }
    return {};
}

std::string params_summary(const ExperimentConfig& config) {
    std::ostringstream out;
    for (const auto& [key, value] : params_json(config).items())
        out << " " << key << "=" << value.dump();
    return out.str();
}

void write_csv(const std::filesystem::path& file, const ErrorTable& table) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + file.string());
    out << "n,error,half_width,p,paths,seed\n";
    char line[256];
    for (const ErrorRow& row : table.rows) {
        std::snprintf(line, sizeof(line), "%ld,%.17g,%.17g,%.17g,%ld,%llu\n", row.n, row.error,
                      row.half_width, table.p, table.paths,
                      static_cast<unsigned long long>(table.seed));
        out << line;
    }
}

} // namespace

ExperimentArtifacts run_experiment(const ExperimentConfig& config, std::ostream& log) {
    const StudyConfig study = to_study(config);

    // The coarsest ladder entry decides admissibility for the whole run.
    const long coarsest = *std::min_element(config.ladder.begin(), config.ladder.end());
    const StepVerdict verdict = validate_step(study.spec, config.horizon / coarsest);
    if (!verdict.admissible) {
        std::ostringstream msg;
        msg << "step bound violated at ladder entry n=" << coarsest
            << ": kappa*h = " << verdict.kappa_dt << " >= 1/2 (need n > "
            << 2.0 * study.spec.kappa * config.horizon << ")";
        throw ParameterError(msg.str());
    }

    log << "process " << family_name(config.family) << ":" << params_summary(config) << "\n"
        << "T=" << config.horizon << " p=" << config.p << " paths=" << config.paths
        << " n_ref=" << study.n_ref << " seed=" << config.seed
        << " solver=" << solver_name(study.solver) << " workers=" << config.workers << "\n";

    ExperimentArtifacts artifacts;
    artifacts.table = error_table(study);

    log << "       n            error       half_width\n";
    char line[160];
    for (const ErrorRow& row : artifacts.table.rows) {
        std::snprintf(line, sizeof(line), "%8ld  %15.8e  %15.8e\n", row.n, row.error,
                      row.half_width);
        log << line;
    }

    const bool fittable =
        artifacts.table.rows.size() >= 3 &&
        std::all_of(artifacts.table.rows.begin(), artifacts.table.rows.end(),
                    [](const ErrorRow& row) { return row.error > 0.0; });
    nlohmann::json fit_json;
    if (fittable) {
        artifacts.fit = fit_order(artifacts.table);
        fit_json = {{"slope", artifacts.fit.slope},
                    {"intercept", artifacts.fit.intercept},
                    {"residual_rms", artifacts.fit.residual_rms}};
        std::snprintf(line, sizeof(line), "fitted slope %.4f (intercept %.4f, residual rms %.4f)\n",
                      artifacts.fit.slope, artifacts.fit.intercept, artifacts.fit.residual_rms);
        log << line;
    } else {
        artifacts.fit = {0.0, 0.0, 0.0};
        fit_json = {{"slope", nullptr}, {"intercept", nullptr}, {"residual_rms", nullptr}};
        log << "order fit skipped (needs >= 3 rows with positive errors)\n";
    }
    log << "min state " << artifacts.table.min_x << " (transformed " << artifacts.table.min_y
        << ")\n";

    std::filesystem::create_directories(config.out_dir);
    artifacts.errors_csv = std::filesystem::path(config.out_dir) / "errors.csv";
    artifacts.fit_json = std::filesystem::path(config.out_dir) / "fit.json";

    write_csv(artifacts.errors_csv, artifacts.table);

    nlohmann::json document = {
        {"fit", fit_json},
        {"min_state", artifacts.table.min_x},
        {"min_transformed_state", artifacts.table.min_y},
        {"config",
         {{"process", family_name(config.family)},
          {"params", params_json(config)},
          {"T", config.horizon},
          {"ladder", config.ladder},
          {"ref_multiplier", config.ref_multiplier},
          {"n_ref", study.n_ref},
          {"paths", config.paths},
          {"p", config.p},
          {"seed", config.seed},
          {"tol", config.tol},
          {"solver", solver_name(study.solver)},
          {"out_dir", config.out_dir},
          {"workers", config.workers}}},
    };
    std::ofstream json_out(artifacts.fit_json, std::ios::binary);
    if (!json_out)
        throw std::runtime_error("cannot write " + artifacts.fit_json.string());
    json_out << document.dump(2) << "\n";

    log << "wrote " << artifacts.errors_csv.string() << ", " << artifacts.fit_json.string()
        << "\n";
    return artifacts;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> catalogue = [] {
        std::vector<Preset> list;

        ExperimentConfig order1;
        order1.family = ProcessFamily::Cir;
        order1.cir = {1.0, 1.0, 0.5, 1.0};
        order1.p = 1.0;
        order1.paths = 10000;
        order1.seed = 42;
        list.push_back({"cir-order1", "Theorem 2 regime (a > sigma^2): strong order 1", order1});

        ExperimentConfig degraded = order1;
        degraded.cir.sigma = 1.3;
        list.push_back({"cir-order-half",
                        "Theorem 1 regime (sigma^2 in (a, 2a)): strong order downgrades toward 1/2",
                        degraded});

        ExperimentConfig cev;
        cev.family = ProcessFamily::Cev;
        cev.cev = {1.0, 1.0, 0.3, 0.75, 1.0};
        cev.p = 2.0;
        cev.paths = 2000;
        cev.seed = 42;
        list.push_back({"cev-order1", "CEV with alpha=3/4: strong order 1", cev});

        ExperimentConfig constant;
        constant.family = ProcessFamily::ConstantDiffusion;
        constant.constant = {2.0, 1.0, 1.0};
        constant.p = 2.0;
        constant.paths = 2000;
        constant.ref_multiplier = 32;
        constant.seed = 42;
        list.push_back({"constant-diffusion-sanity",
                        "constant diffusion, linear drift: implicit matches the explicit baseline",
                        constant});

        return list;
    }();
    return catalogue;
}

void print_presets(std::ostream& out) {
    for (const Preset& preset : presets()) {
        out << preset.name << "\n    " << preset.regime << "\n    process="
            << family_name(preset.config.family) << params_summary(preset.config)
            << " T=" << preset.config.horizon << " p=" << preset.config.p
            << " paths=" << preset.config.paths << " ref_multiplier="
            << preset.config.ref_multiplier << " seed=" << preset.config.seed << "\n";
    }
}

} // namespace isde
