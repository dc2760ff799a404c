// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace serdsp {

// Seedable generator used everywhere randomness is needed. mt19937_64 output
// is pinned by the standard, and the uniform/gaussian mappings below avoid
// std::uniform_real_distribution / std::normal_distribution, whose streams
// differ between standard libraries. Identical seeds give identical traces
// on any platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform double in (0, 1], 53-bit resolution.
    double uniform01() {
        uint64_t u = gen_() >> 11;
        return (static_cast<double>(u) + 1.0) * (1.0 / 9007199254740992.0);
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * (uniform01() - 1.0 / 9007199254740992.0); }

    /// Standard normal via Box-Muller; pairs are cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    /// Uniform index in [0, 2^bits) from the top bits of one draw.
    /// Rejection-free, so the consumed stream length is input-independent.
    uint64_t index_pow2(unsigned bits) { return gen_() >> (64u - bits); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace serdsp
