#pragma once

#include <array>
#include <cstdint>

namespace isde {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
/// Stateless: the output is a pure function of (counter, key), which is what
/// makes per-path streams reproducible independently of scheduling.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);
};

/// Stream of independent N(0,1) draws for one (master seed, path index) pair.
///
/// Draw number k is a pure function of (seed, path, k): the key is the master
/// seed, the counter carries (block index, path index), and each Philox block
/// yields one Box-Muller pair.  Distinct paths can be generated concurrently
/// by distinct workers and always reproduce bit-identically.
class NormalStream {
public:
    NormalStream(std::uint64_t master_seed, std::uint64_t path_index);

    /// Next standard normal draw.
    double next();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path() const { return path_; }

private:
    std::uint64_t seed_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace isde
