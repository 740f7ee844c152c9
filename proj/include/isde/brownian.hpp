#pragma once

#include <span>
#include <vector>

#include "isde/rng.hpp"

namespace isde {

/// Uniform grid t_k = k T / n on [0, T].
struct TimeGrid {
    TimeGrid(double horizon, long steps);

    double horizon; ///< T > 0
    long steps;     ///< n >= 1

    double dt() const { return horizon / static_cast<double>(steps); }
    double time(long k) const { return static_cast<double>(k) * horizon / static_cast<double>(steps); }

    bool operator==(const TimeGrid&) const = default;
};

/// Brownian increments dW_k = W_{t_{k+1}} - W_{t_k} on a uniform grid.
/// Increments are the stored primitive; W values are derived by cumulative().
class IncrementArray {
public:
    IncrementArray(TimeGrid grid, std::vector<double> values);

    const TimeGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    long size() const { return static_cast<long>(values_.size()); }

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Round to the 2^-26 binary grid used by generate_increments().
/// Sums of such values stay exactly representable in double precision up to
/// magnitude 2^27, so partial sums are independent of association and the
/// coarsen/cumulative coupling below is exact rather than within-tolerance.
double round_to_coupling_grid(double x);

/// n independent Gaussian increments, mean 0 and variance T/n, rounded to the
/// coupling grid.  Draw k of the stream maps to increment k, so the output is
/// fully determined by (seed, path index) regardless of worker scheduling.
IncrementArray generate_increments(const TimeGrid& grid, NormalStream& stream);

/// Sum blocks of `factor` consecutive increments, left to right.
/// `factor` must divide the fine step count.
IncrementArray coarsen(const IncrementArray& fine, long factor);

/// W values at grid times with W_0 = 0, by left-to-right partial sums.
/// For arrays produced by generate_increments, cumulative(coarsen(a, m))
/// equals cumulative(a) subsampled every m points exactly.
std::vector<double> cumulative(std::span<const double> increments);
std::vector<double> cumulative(const IncrementArray& increments);

} // namespace isde
