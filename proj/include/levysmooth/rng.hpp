#pragma once

#include "levysmooth/common.hpp"

#include <cmath>
#include <cstdint>

namespace levysmooth {

// Seed plus stream id. Identical (seed, stream) pairs reproduce the exact
// same draw sequence; distinct streams are decorrelated through splitmix
// re-keying, which is what the per-path parallel contract relies on.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

// xoshiro256++ keyed by (seed, stream).
class Rng {
public:
    explicit Rng(RngSeed key) {
        std::uint64_t x = key.seed;
        std::uint64_t mix = detail::splitmix64(x) ^ (key.stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
        for (auto& w : state_) w = detail::splitmix64(mix);
        // one warm-up round so near-zero mixes do not leak structure
        next();
    }
    Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RngSeed{seed, stream}) {}

    std::uint64_t next() {
        std::uint64_t r = rotl(state_[0] + state_[3], 23) + state_[0];
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return r;
    }

    // uniform on [0,1)
    double u01() { return (next() >> 11) * 0x1.0p-53; }

    // uniform on (0,1], safe as log() argument
    double u01_open() { return ((next() >> 11) + 1) * 0x1.0p-53; }

    double exponential() { return -std::log(u01_open()); }

    // Box-Muller pair, one value cached
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u = u01_open();
        double v = u01();
        double r = std::sqrt(-2.0 * std::log(u));
        cached_ = r * std::sin(2.0 * kPi * v);
        have_cached_ = true;
        return r * std::cos(2.0 * kPi * v);
    }

    // Exact Poisson sampling: inversion for small means, Hormann's PTRS
    // transformed rejection for large ones.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean < 10.0) {
            double l = std::exp(-mean);
            std::uint64_t k = 0;
            double p = u01_open();
            while (p > l) {
                ++k;
                p *= u01_open();
            }
            return k;
        }
        // PTRS (W. Hormann, 1993)
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            double u = u01() - 0.5;
            double v = u01_open();
            double us = 0.5 - std::abs(u);
            double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0)) {
                return static_cast<std::uint64_t>(k);
            }
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Chambers-Mallows-Stuck draw of a standard symmetric alpha-stable variable,
// characteristic function exp(-|xi|^alpha).
inline double sample_sas(Rng& rng, double alpha) {
    double u = kPi * (rng.u01() - 0.5);  // uniform on (-pi/2, pi/2)
    double e = rng.exponential();
    if (std::abs(alpha - 1.0) < 1e-12) return std::tan(u);
    double t = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
    double s = std::pow(std::cos((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
    return t * s;
}

}  // namespace levysmooth
