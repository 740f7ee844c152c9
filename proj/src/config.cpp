#include "isde/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "isde/errors.hpp"

namespace isde {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& token, const std::string& key) {
    const std::string t = trim(token);
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || t.empty())
        throw ConfigError("config: invalid number for '" + key + "': " + t);
    return value;
}

long parse_integer(const std::string& token, const std::string& key) {
    const double value = parse_number(token, key);
    const long rounded = static_cast<long>(std::llround(value));
    if (std::abs(value - static_cast<double>(rounded)) > 0.0)
        throw ConfigError("config: '" + key + "' must be an integer");
    return rounded;
}

std::string parse_string(const std::string& token, const std::string& key) {
    const std::string t = trim(token);
    if (t.size() < 2 || t.front() != '"' || t.back() != '"')
        throw ConfigError("config: '" + key + "' must be a quoted string");
    return t.substr(1, t.size() - 2);
}

std::vector<long> parse_integer_array(const std::string& token, const std::string& key) {
    const std::string t = trim(token);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ConfigError("config: '" + key + "' must be an array like [8, 16, 32]");
    std::vector<long> out;
    std::string body = t.substr(1, t.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty())
            throw ConfigError("config: empty entry in array '" + key + "'");
        out.push_back(parse_integer(item, key));
    }
    if (out.empty())
        throw ConfigError("config: array '" + key + "' is empty");
    return out;
}

double require(const std::map<std::string, double>& params, const std::string& key,
               const std::string& family) {
    const auto it = params.find(key);
    if (it == params.end())
        throw ConfigError("config: [params] is missing '" + key + "' for process \"" + family +
                          "\"");
    return it->second;
}

void validate_config(const ExperimentConfig& config) {
    if (config.ladder.empty())
        throw ConfigError("config: ladder must not be empty");
    long previous = 0;
    for (long n : config.ladder) {
        if (n < 1 || n <= previous)
            throw ConfigError("config: ladder must be strictly increasing and positive");
        previous = n;
    }
    if (config.ref_multiplier < 1)
        throw ConfigError("config: ref_multiplier must be >= 1");
    const long n_ref = config.reference_steps();
    for (long n : config.ladder)
        if (n_ref % n != 0)
            throw ConfigError("config: ladder entry " + std::to_string(n) +
                              " does not divide the reference step count " + std::to_string(n_ref));
    if (!(config.horizon > 0.0))
        throw ConfigError("config: T must be positive");
    if (config.paths < 1)
        throw ConfigError("config: paths must be >= 1");
    if (!(config.p >= 1.0))
        throw ConfigError("config: p must be >= 1");
    if (!(config.tol > 0.0))
        throw ConfigError("config: tol must be positive");
    if (config.workers < 0)
        throw ConfigError("config: workers must be >= 0");
    if (config.solver != "auto" && config.solver != "closed-form" && config.solver != "root-find")
        throw ConfigError("config: solver must be auto, closed-form or root-find");
}

} // namespace

std::string family_name(ProcessFamily family) {
    switch (family) {
    case ProcessFamily::Cir: return "cir";
    case ProcessFamily::Cev: return "cev";
    case ProcessFamily::LampertiBuiltin: return "lamperti-builtin";
    case ProcessFamily::ConstantDiffusion: return "constant-diffusion";
    }
    return "?";
}

ProcessFamily family_from_name(const std::string& name) {
    if (name == "cir")
        return ProcessFamily::Cir;
    if (name == "cev")
        return ProcessFamily::Cev;
    if (name == "lamperti-builtin")
        return ProcessFamily::LampertiBuiltin;
    if (name == "constant-diffusion")
        return ProcessFamily::ConstantDiffusion;
    throw ConfigError("config: unknown process \"" + name +
                      "\" (expected cir, cev, lamperti-builtin or constant-diffusion)");
}

long ExperimentConfig::reference_steps() const {
    const long largest = *std::max_element(ladder.begin(), ladder.end());
    return ref_multiplier * largest;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    std::map<std::string, double> params;
    bool saw_process = false;

    std::string section;
    std::istringstream lines(text);
    std::string raw;
    long line_number = 0;
    while (std::getline(lines, raw)) {
        ++line_number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_number) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "params")
                throw ConfigError("config line " + std::to_string(line_number) +
                                  ": unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_number) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_number) +
                              ": expected key = value");

        if (section == "params") {
            params[key] = parse_number(value, key);
            continue;
        }

        if (key == "process") {
            config.family = family_from_name(parse_string(value, key));
            saw_process = true;
        } else if (key == "T") {
            config.horizon = parse_number(value, key);
        } else if (key == "ladder") {
            config.ladder = parse_integer_array(value, key);
        } else if (key == "ref_multiplier") {
            config.ref_multiplier = parse_integer(value, key);
        } else if (key == "paths") {
            config.paths = parse_integer(value, key);
        } else if (key == "p") {
            config.p = parse_number(value, key);
        } else if (key == "seed") {
            const long seed = parse_integer(value, key);
            if (seed < 0)
                throw ConfigError("config: seed must be nonnegative");
            config.seed = static_cast<std::uint64_t>(seed);
        } else if (key == "tol") {
            config.tol = parse_number(value, key);
        } else if (key == "solver") {
            config.solver = parse_string(value, key);
        } else if (key == "out_dir") {
            config.out_dir = parse_string(value, key);
        } else if (key == "workers") {
            config.workers = static_cast<int>(parse_integer(value, key));
        } else {
            throw ConfigError("config line " + std::to_string(line_number) + ": unknown key '" +
                              key + "'");
        }
    }

    if (!saw_process)
        throw ConfigError("config: missing 'process' key");

    const std::string family = family_name(config.family);
    switch (config.family) {
    case ProcessFamily::Cir:
        config.cir = {require(params, "a", family), require(params, "k", family),
                      require(params, "sigma", family), require(params, "x0", family)};
        break;
    case ProcessFamily::Cev:
        config.cev = {require(params, "a", family), require(params, "k", family),
                      require(params, "sigma", family), require(params, "alpha", family),
                      require(params, "x0", family)};
        break;
    case ProcessFamily::LampertiBuiltin:
        config.lamperti = {require(params, "sigma_base", family),
                           require(params, "sigma_amp", family), require(params, "b0", family),
                           require(params, "b1", family), require(params, "x0", family)};
        break;
    case ProcessFamily::ConstantDiffusion:
        config.constant = {require(params, "sigma0", family), require(params, "lambda", family),
                           require(params, "x0", family)};
        break;
    }

    validate_config(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ConfigError("config: cannot read " + file.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

ProcessSpec build_spec(const ExperimentConfig& config) {
    switch (config.family) {
    case ProcessFamily::Cir:
        return cir_spec(config.cir);
    case ProcessFamily::Cev:
        return cev_spec(config.cev);
    case ProcessFamily::LampertiBuiltin: {
        const LampertiBuiltinParams& p = config.lamperti;
        LampertiSpec spec;
        spec.drift_x = [p](double x) { return p.b0 - p.b1 * x; };
        spec.diffusion = [p](double x) { return p.sigma_base + p.sigma_amp * std::cos(x); };
        spec.diffusion_prime = [p](double x) { return -p.sigma_amp * std::sin(x); };
        spec.sigma_lo = p.sigma_base - std::abs(p.sigma_amp);
        spec.sigma_hi = p.sigma_base + std::abs(p.sigma_amp);
        spec.x0 = p.x0;
        return lamperti_spec(spec);
    }
    case ProcessFamily::ConstantDiffusion:
        return constant_diffusion_spec(config.constant.sigma0, config.constant.lambda,
                                       config.constant.x0);
    }
    throw ConfigError("config: unknown process family");
}

StudyConfig to_study(const ExperimentConfig& config) {
    StudyConfig study;
    study.spec = build_spec(config);
    study.horizon = config.horizon;
    study.n_ref = config.reference_steps();
    study.ladder = config.ladder;
    study.paths = config.paths;
    study.p = config.p;
    study.seed = config.seed;
    study.tol = config.tol;
    study.workers = config.workers;
    if (config.solver == "closed-form") {
        study.solver = StepSolver::ClosedForm;
    } else if (config.solver == "root-find") {
        study.solver = StepSolver::RootFind;
    } else {
        study.solver = study.spec.exact_step ? StepSolver::ClosedForm : StepSolver::RootFind;
    }
    return study;
}

} // namespace isde
