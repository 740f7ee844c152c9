#pragma once

#include <stdexcept>
#include <string>

namespace isde {

/// A config file (or config text) could not be parsed.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters violate an admissibility condition of a process family or
/// scheme (e.g. the CIR standing assumption 2a >= sigma^2, or a step size
/// too large for the one-sided Lipschitz bound).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The implicit-step solver exhausted its iteration budget.  Carries the
/// Monte Carlo path index and fine-grid step index when known (-1 otherwise).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what, long path_index = -1, long step_index = -1)
        : std::runtime_error(what), path_index(path_index), step_index(step_index) {}

    long path_index;
    long step_index;
};

} // namespace isde
