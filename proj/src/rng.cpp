#include "isde/rng.hpp"

#include <cmath>
#include <numbers>

namespace isde {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// Uniform draw on (0, 1] from 53 random bits; never 0, so log() is safe.
inline double uniform_open_closed(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

} // namespace

std::array<std::uint32_t, 4> Philox4x32::block(const std::array<std::uint32_t, 4>& counter,
                                               const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kMul0, c[0], hi0, lo0);
        mul_hi_lo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        if (round != 9) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
    }
    return c;
}

NormalStream::NormalStream(std::uint64_t master_seed, std::uint64_t path_index)
    : seed_(master_seed), path_(path_index) {}

double NormalStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(path_),
        static_cast<std::uint32_t>(path_ >> 32),
    };
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32),
    };
    const auto words = Philox4x32::block(counter, key);
    ++block_;

    const std::uint64_t bits0 = (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
    const std::uint64_t bits1 = (static_cast<std::uint64_t>(words[3]) << 32) | words[2];
    const double u1 = uniform_open_closed(bits0);
    const double u2 = uniform_open_closed(bits1);

    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

} // namespace isde
