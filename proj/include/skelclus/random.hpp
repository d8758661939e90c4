#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace skelclus {

struct RngSeed {
    std::uint64_t value = 0;
};

/// splitmix64 finaliser; used to derive independent child seeds from a
/// master seed and a stream index (restart number, experiment seed, ...).
inline std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline RngSeed derive_seed(RngSeed master, std::uint64_t stream) noexcept {
    return {mix_seed(master.value ^ mix_seed(stream + 0x5bd1e995ULL))};
}

/// mt19937_64 with hand-rolled variate transforms. The standard
/// distributions are implementation-defined, these are not, so a seed gives
/// the same stream on every toolchain.
class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), rejection sampled.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller; the spare variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace skelclus
