#include "isde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "isde/brownian.hpp"
#include "isde/errors.hpp"

namespace isde {

namespace {

// two-sided 99% normal quantile
constexpr double kZ99 = 2.5758293035489004;

// Run body(i) for i in [0, count), split across workers in contiguous
// blocks.  Results must be written to per-index slots; the first exception
// is rethrown after all workers finish.
void parallel_for_paths(long count, int workers, const std::function<void(long)>& body) {
    int effective = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (effective < 1)
        effective = 1;
    if (static_cast<long>(effective) > count)
        effective = static_cast<int>(std::max<long>(count, 1));

    if (effective == 1) {
        for (long i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(effective));
    for (int t = 0; t < effective; ++t) {
        const long lo = count * t / effective;
        const long hi = count * (t + 1) / effective;
        pool.emplace_back([&, lo, hi] {
            try {
                for (long i = lo; i < hi; ++i) {
                    {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (failure)
                            return;
                    }
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& worker : pool)
        worker.join();
    if (failure)
        std::rethrow_exception(failure);
}

void check_study(const StudyConfig& config) {
    if (!(config.spec.noise > 0.0))
        throw ParameterError("study requires a positive noise scale");
    if (!(config.p >= 1.0))
        throw ParameterError("study requires moment order p >= 1");
    if (config.paths < 1)
        throw ParameterError("study requires at least one path");
    if (!(config.tol > 0.0))
        throw ParameterError("study requires a positive solver tolerance");
    if (config.n_ref < 1)
        throw ParameterError("study requires a positive reference step count");
    if (config.ladder.empty())
        throw ParameterError("study requires a nonempty ladder");
    long previous = 0;
    for (long n : config.ladder) {
        if (n <= previous)
            throw ParameterError("ladder step counts must be strictly increasing");
        if (config.n_ref % n != 0)
            throw ParameterError("ladder entry " + std::to_string(n) +
                                 " does not divide the reference step count " +
                                 std::to_string(config.n_ref));
        previous = n;
    }
}

} // namespace

double pathwise_sup_error(const SchemePath& coarse, const SchemePath& reference) {
    if (!(coarse.fine_grid == reference.fine_grid))
        throw std::invalid_argument("pathwise_sup_error: paths must share the fine grid");
    double sup = 0.0;
    for (std::size_t k = 0; k < coarse.x.size(); ++k) {
        const double d = std::abs(coarse.x[k] - reference.x[k]);
        if (d > sup)
            sup = d;
    }
    return sup;
}

std::pair<double, double> lp_estimate(std::span<const double> sup_errors, double p) {
    if (sup_errors.empty())
        throw std::invalid_argument("lp_estimate: no samples");
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_estimate: p must be >= 1");

    const double count = static_cast<double>(sup_errors.size());
    double mean = 0.0;
    for (double e : sup_errors)
        mean += (p == 1.0) ? e : std::pow(e, p);
    mean /= count;
    if (mean == 0.0)
        return {0.0, 0.0};

    double sum_sq = 0.0;
    for (double e : sup_errors) {
        const double d = ((p == 1.0) ? e : std::pow(e, p)) - mean;
        sum_sq += d * d;
    }
    const double variance = sup_errors.size() > 1 ? sum_sq / (count - 1.0) : 0.0;
    const double standard_error = std::sqrt(variance / count);

    const double estimate = std::pow(mean, 1.0 / p);
    const double derivative = std::pow(mean, 1.0 / p - 1.0) / p;
    return {estimate, kZ99 * standard_error * derivative};
}

ErrorTable error_table(const StudyConfig& config) {
    check_study(config);
    const TimeGrid grid(config.horizon, config.n_ref);
    if (config.coarse_scheme == CoarseScheme::EulerMaruyama && config.spec.interval.bounded_below())
        throw ParameterError("euler-maruyama study requires the whole real line");

    const std::size_t levels = config.ladder.size();
    const std::size_t paths = static_cast<std::size_t>(config.paths);
    std::vector<std::vector<double>> sup(levels, std::vector<double>(paths, 0.0));
    std::vector<double> path_min_y(paths, 0.0);
    std::vector<double> path_min_x(paths, 0.0);

    parallel_for_paths(config.paths, config.workers, [&](long i) {
        NormalStream stream(config.seed, static_cast<std::uint64_t>(i));
        const IncrementArray increments = generate_increments(grid, stream);
        const SchemePath reference =
            simulate_path(config.spec, increments, 1, config.solver, config.tol, i);
        double min_y = reference.min_y;
        double min_x = reference.min_x;
        for (std::size_t l = 0; l < levels; ++l) {
            const long factor = config.n_ref / config.ladder[l];
            const SchemePath coarse =
                config.coarse_scheme == CoarseScheme::Implicit
                    ? simulate_path(config.spec, increments, factor, config.solver, config.tol, i)
                    : euler_maruyama_path(config.spec, increments, factor);
            sup[l][static_cast<std::size_t>(i)] = pathwise_sup_error(coarse, reference);
            min_y = std::min(min_y, coarse.min_y);
            min_x = std::min(min_x, coarse.min_x);
        }
        path_min_y[static_cast<std::size_t>(i)] = min_y;
        path_min_x[static_cast<std::size_t>(i)] = min_x;
    });

    ErrorTable table;
    table.p = config.p;
    table.paths = config.paths;
    table.n_ref = config.n_ref;
    table.seed = config.seed;
    table.min_y = *std::min_element(path_min_y.begin(), path_min_y.end());
    table.min_x = *std::min_element(path_min_x.begin(), path_min_x.end());
    table.rows.reserve(levels);
    for (std::size_t l = 0; l < levels; ++l) {
        const auto [error, half_width] = lp_estimate(sup[l], config.p);
        table.rows.push_back({config.ladder[l], error, half_width});
    }
    return table;
}

std::pair<double, double> strong_error(const StudyConfig& config, long n) {
    StudyConfig single = config;
    single.ladder = {n};
    const ErrorTable table = error_table(single);
    return {table.rows[0].error, table.rows[0].half_width};
}

OrderFit fit_order(const ErrorTable& table) {
    const std::size_t m = table.rows.size();
    if (m < 3)
        throw std::invalid_argument("fit_order: need at least 3 rows");
    for (const ErrorRow& row : table.rows)
        if (!(row.error > 0.0))
            throw std::invalid_argument("fit_order: zero error row at n = " +
                                        std::to_string(row.n));

    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = std::log2(static_cast<double>(table.rows[i].n));
        ys[i] = std::log2(table.rows[i].error);
    }
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= static_cast<double>(m);
    y_mean /= static_cast<double>(m);

    double covariance = 0.0, variance = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        covariance += (xs[i] - x_mean) * (ys[i] - y_mean);
        variance += (xs[i] - x_mean) * (xs[i] - x_mean);
    }
    const double slope_ols = covariance / variance;
    const double intercept = y_mean - slope_ols * x_mean;

    double residual_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (intercept + slope_ols * xs[i]);
        residual_sq += r * r;
    }
    return {-slope_ols, intercept, std::sqrt(residual_sq / static_cast<double>(m))};
}

double moment_estimate(const StudyConfig& config, double q, double t) {
    check_study(config);
    const TimeGrid grid(config.horizon, config.n_ref);
    const double dt = grid.dt();
    const long index = static_cast<long>(std::llround(t / dt));
    if (index < 0 || index > grid.steps ||
        std::abs(grid.time(index) - t) > 1e-9 * std::max(1.0, config.horizon))
        throw std::invalid_argument("moment_estimate: t must lie on the fine grid");

    std::vector<double> values(static_cast<std::size_t>(config.paths));
    parallel_for_paths(config.paths, config.workers, [&](long i) {
        NormalStream stream(config.seed, static_cast<std::uint64_t>(i));
        const IncrementArray increments = generate_increments(grid, stream);
        const SchemePath path =
            simulate_path(config.spec, increments, 1, config.solver, config.tol, i);
        const double state = path.x[static_cast<std::size_t>(index)];
        if (q < 0.0 && !(state > 0.0))
            throw SolverError("moment_estimate: nonpositive state with negative moment order", i,
                              index);
        values[static_cast<std::size_t>(i)] = q == 0.0 ? 1.0 : std::pow(state, q);
    });

    double mean = 0.0;
    for (double v : values)
        mean += v;
    return mean / static_cast<double>(config.paths);
}

} // namespace isde
