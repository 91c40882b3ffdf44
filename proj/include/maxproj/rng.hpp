#pragma once

#include <array>
#include <cstdint>

namespace maxproj {

/// splitmix64 finalizer; used for seeding and for deriving stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*!
 * xoshiro256** generator with counter-indexed streams.
 *
 * Every stochastic routine in the library takes an Rng by reference. Parallel
 * replications never share a generator: replication r of a run seeded with s
 * uses Rng::stream(s, r), so results do not depend on how replications are
 * scheduled across threads. Uniform and normal variates are produced by
 * in-house transforms (not <random> distributions, whose output is
 * implementation-defined) so tables are reproducible across toolchains.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0x5eed) noexcept;

    /// Generator for stream `index` of master seed `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index) noexcept;
    /// Two-level stream, e.g. (replication, purpose).
    static Rng stream(std::uint64_t seed, std::uint64_t index,
                      std::uint64_t sub) noexcept;

    std::uint64_t next() noexcept;
    std::uint64_t operator()() noexcept { return next(); }
    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1).
    double uniform_open() noexcept;
    /// Standard normal (Marsaglia polar method, caches the second variate).
    double normal() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace maxproj
