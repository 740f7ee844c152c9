#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "isde/brownian.hpp"

using namespace isde;

TEST_CASE("time grid validation") {
    CHECK_THROWS_AS(TimeGrid(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(1.0, 0), std::invalid_argument);
    const TimeGrid grid(2.0, 8);
    CHECK(grid.dt() == doctest::Approx(0.25));
    CHECK(grid.time(8) == doctest::Approx(2.0));
}

TEST_CASE("generate_increments is deterministic in (seed, path)") {
    const TimeGrid grid(1.0, 4);
    NormalStream s1(123, 5);
    NormalStream s2(123, 5);
    const auto a = generate_increments(grid, s1);
    const auto b = generate_increments(grid, s2);
    CHECK(a.values() == b.values());
}

TEST_CASE("increments sit on the coupling grid") {
    const TimeGrid grid(1.0, 64);
    NormalStream stream(9, 1);
    const auto inc = generate_increments(grid, stream);
    for (double v : inc.values()) {
        const double scaled = v * 0x1.0p26;
        CHECK(scaled == std::round(scaled));
    }
}

TEST_CASE("increment statistics match the Brownian law") {
    // h = 0.01; one long path of 10^6 increments.
    const TimeGrid grid(1e4, 1'000'000);
    NormalStream stream(7, 0);
    const auto inc = generate_increments(grid, stream);
    double sum = 0.0, sum_sq = 0.0;
    for (double v : inc.values()) {
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(inc.size());
    const double mean = sum / n;
    const double variance = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 4e-4);
    CHECK(std::abs(variance / grid.dt() - 1.0) < 0.01);
}

TEST_CASE("single increment has unit variance on T=1, n=1") {
    const TimeGrid grid(1.0, 1);
    const long paths = 100'000;
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < paths; ++i) {
        NormalStream stream(11, static_cast<std::uint64_t>(i));
        const double v = generate_increments(grid, stream).values()[0];
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / paths;
    const double variance = sum_sq / paths - mean * mean;
    CHECK(std::abs(variance - 1.0) < 0.02);
}

TEST_CASE("coarsen sums blocks left to right") {
    const IncrementArray fine(TimeGrid(1.0, 4), {0.1, -0.2, 0.3, 0.4});

    const auto by_two = coarsen(fine, 2);
    REQUIRE(by_two.size() == 2);
    CHECK(by_two.values()[0] == 0.1 + -0.2);
    CHECK(by_two.values()[1] == 0.3 + 0.4);
    CHECK(by_two.values()[0] == doctest::Approx(-0.1));
    CHECK(by_two.values()[1] == doctest::Approx(0.7));

    const auto identity = coarsen(fine, 1);
    CHECK(identity.values() == fine.values());

    CHECK_THROWS_AS(coarsen(fine, 3), std::invalid_argument);
}

TEST_CASE("cumulative partial sums") {
    const IncrementArray inc(TimeGrid(1.0, 2), {0.5, -0.5});
    CHECK(cumulative(inc) == std::vector<double>{0.0, 0.5, 0.0});

    const std::vector<double> empty;
    CHECK(cumulative(std::span<const double>(empty)) == std::vector<double>{0.0});
}

TEST_CASE("exact coupling: coarsened cumulative equals subsampled cumulative") {
    const TimeGrid grid(1.0, 64);
    NormalStream stream(321, 17);
    const auto fine = generate_increments(grid, stream);
    const auto w_fine = cumulative(fine);

    for (long m : {1L, 2L, 4L, 8L, 16L, 32L, 64L}) {
        const auto w_coarse = cumulative(coarsen(fine, m));
        REQUIRE(w_coarse.size() == static_cast<std::size_t>(64 / m) + 1);
        for (std::size_t j = 0; j < w_coarse.size(); ++j) {
            // bitwise equality, not approximate
            CHECK(w_coarse[j] == w_fine[j * static_cast<std::size_t>(m)]);
        }
    }
}
