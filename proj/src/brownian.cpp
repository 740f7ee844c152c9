#include "isde/brownian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace isde {

TimeGrid::TimeGrid(double horizon, long steps) : horizon(horizon), steps(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
    if (steps < 1)
        throw std::invalid_argument("TimeGrid: step count must be >= 1");
}

IncrementArray::IncrementArray(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<long>(values_.size()) != grid_.steps)
        throw std::invalid_argument("IncrementArray: expected " + std::to_string(grid_.steps) +
                                    " increments, got " + std::to_string(values_.size()));
}

double round_to_coupling_grid(double x) {
    return std::round(x * 0x1.0p26) * 0x1.0p-26;
}

IncrementArray generate_increments(const TimeGrid& grid, NormalStream& stream) {
    const double scale = std::sqrt(grid.dt());
    std::vector<double> values(static_cast<std::size_t>(grid.steps));
    for (double& v : values)
        v = round_to_coupling_grid(scale * stream.next());
    return IncrementArray(grid, std::move(values));
}

IncrementArray coarsen(const IncrementArray& fine, long factor) {
    const long n = fine.grid().steps;
    if (factor < 1 || n % factor != 0)
        throw std::invalid_argument("coarsen: factor " + std::to_string(factor) +
                                    " does not divide step count " + std::to_string(n));
    const long coarse_n = n / factor;
    std::vector<double> sums(static_cast<std::size_t>(coarse_n), 0.0);
    const auto& v = fine.values();
    for (long j = 0; j < coarse_n; ++j) {
        double s = 0.0;
        for (long i = j * factor; i < (j + 1) * factor; ++i)
            s += v[static_cast<std::size_t>(i)];
        sums[static_cast<std::size_t>(j)] = s;
    }
    return IncrementArray(TimeGrid(fine.grid().horizon, coarse_n), std::move(sums));
}

std::vector<double> cumulative(std::span<const double> increments) {
    std::vector<double> w(increments.size() + 1);
    w[0] = 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < increments.size(); ++k) {
        s += increments[k];
        w[k + 1] = s;
    }
    return w;
}

std::vector<double> cumulative(const IncrementArray& increments) {
    return cumulative(std::span<const double>(increments.values()));
}

} // namespace isde
