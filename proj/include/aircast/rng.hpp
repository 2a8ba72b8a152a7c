#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aircast {

/// Seeded random source with distribution code owned by this project, so that
/// identical seeds give identical streams on every platform we build on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() {
        // 53 random mantissa bits.
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (polar form avoided to keep draw count fixed).
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Uniform integer in [0, bound). bound must be positive.
    std::size_t index(std::size_t bound) { return static_cast<std::size_t>(gen_() % bound); }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

/// In-place Fisher-Yates shuffle driven by Rng (stable across standard libraries,
/// unlike std::shuffle).
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng.index(i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace aircast
