#include "maxproj/rng.hpp"

#include <cmath>

namespace maxproj {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t st = a ^ (b * 0xd1b54a32d192ed03ULL);
    std::uint64_t h = splitmix64(st);
    st ^= h + b;
    return splitmix64(st);
}

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept {
    std::uint64_t st = seed;
    for (auto& w : s_) w = splitmix64(st);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return Rng(mix_key(seed, index + 1));
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index, std::uint64_t sub) noexcept {
    return Rng(mix_key(mix_key(seed, index + 1), sub + 0x51ed27ULL));
}

std::uint64_t Rng::next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() noexcept {
    return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

}  // namespace maxproj
