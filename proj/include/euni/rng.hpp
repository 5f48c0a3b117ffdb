#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace euni {

/// Seeded generator with library-independent conversions.
/// std::uniform_real_distribution differs between standard libraries, so the
/// conversions are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform in [0,1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(eng_());
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do { x = eng_(); } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    /// Standard normal via Box-Muller.
    double normal()
    {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace euni
