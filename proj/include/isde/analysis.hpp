#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "isde/processes.hpp"
#include "isde/schemes.hpp"

namespace isde {

struct ErrorRow {
    long n;            ///< coarse step count
    double error;      ///< (E[sup_t |X_coarse - X_ref|^p])^{1/p} estimate
    double half_width; ///< 99% confidence half-width (delta method for the 1/p power)
};

/// Strong-error estimates across a ladder of coarse step counts, all driven
/// by the same fine increments per path index.
struct ErrorTable {
    std::vector<ErrorRow> rows;
    double p = 1.0;
    long paths = 0;
    long n_ref = 0;
    std::uint64_t seed = 0;
    double min_y = 0.0; ///< smallest transformed state seen across all paths/levels
    double min_x = 0.0; ///< smallest original state seen across all paths/levels
};

/// Least-squares fit of log2(error) against log2(n); slope is reported
/// negated so an order-1 scheme fits slope +1.
struct OrderFit {
    double slope;
    double intercept;
    double residual_rms;
};

enum class CoarseScheme {
    Implicit,      ///< drift implicit scheme at every ladder level
    EulerMaruyama, ///< explicit baseline (I = R only); reference stays implicit
};

/// Settings for one coupled-path Monte Carlo study.
struct StudyConfig {
    ProcessSpec spec;
    double horizon = 1.0;
    long n_ref = 1 << 15;
    std::vector<long> ladder = {8, 16, 32, 64, 128, 256};
    long paths = 1000;
    double p = 1.0;
    std::uint64_t seed = 0;
    double tol = 1e-12;
    StepSolver solver = StepSolver::RootFind;
    CoarseScheme coarse_scheme = CoarseScheme::Implicit;
    int workers = 0; ///< 0 = hardware concurrency; never affects results
};

/// max over the shared fine grid of |x_coarse(u) - x_ref(u)|.
double pathwise_sup_error(const SchemePath& coarse, const SchemePath& reference);

/// (mean of e^p)^{1/p} over the samples, with its 99% half-width.
/// For p = 1 this is exactly the sample mean.
std::pair<double, double> lp_estimate(std::span<const double> sup_errors, double p);

/// Full ladder study.  Per path: generate fine increments once, run the
/// implicit reference at the fine step, then each ladder level against it.
/// Deterministic given the master seed, for any worker count.
ErrorTable error_table(const StudyConfig& config);

/// Single-ladder-level convenience wrapper; returns (error, half_width).
std::pair<double, double> strong_error(const StudyConfig& config, long n);

OrderFit fit_order(const ErrorTable& table);

/// Monte Carlo mean of X_t^q over paths simulated at the fine step, as
/// empirical evidence of moment boundedness.  t must lie on the fine grid.
double moment_estimate(const StudyConfig& config, double q, double t);

} // namespace isde
