#ifndef CJS_RNG_HPP
#define CJS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace cjs {

/// Pinned generator stack, written into every output header so reruns
/// across versions stay comparable.
inline constexpr const char* kGeneratorDescription =
    "engine=mt19937_64; streams=splitmix64(seed,stream,index); normal=marsaglia-polar";

/// One splitmix64 step (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based seed for an independent stream; index is usually the trial.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

/// Stream identifiers used by the harness.
enum class Stream : std::uint64_t { noise = 1, theta = 2, theory_mc = 3, concentration = 4 };

/// Seeded generator with portable uniform and standard-normal draws.
/// std::normal_distribution is implementation-defined, so it is not used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept {
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
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cjs

#endif  // CJS_RNG_HPP
