#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lrcp {

/// splitmix64 mixing step; used to derive well-separated seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream with substream support.
///
/// The engine is std::mt19937_64 (bit-exact per the standard); uniform and
/// normal variates are mapped in this class rather than through
/// std::normal_distribution, whose output is implementation-defined. A
/// master seed plus a stream index give independent substreams, so Monte
/// Carlo replications are reproducible regardless of scheduling order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    [[nodiscard]] static Rng substream(std::uint64_t master_seed, std::uint64_t stream_index) {
        return Rng(splitmix64(master_seed) ^ splitmix64(stream_index * 0x9E3779B97F4A7C15ULL + 1));
    }

    [[nodiscard]] std::uint64_t next_u64() { return engine_(); }

    /// Uniform on (0, 1): 53-bit mantissa, never exactly 0 or 1.
    [[nodiscard]] double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller transform (one spare cached).
    [[nodiscard]] double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace lrcp
