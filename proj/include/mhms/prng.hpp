// Deterministic splittable PRNG. All randomness in the engine (k-means
// initialization, oracle-check instance generation, test generators) flows
// from a single 64-bit seed through this generator; there is no global RNG.
//
// Core step is SplitMix64 (Steele, Lea & Flood 2014): state advances by the
// golden-gamma constant and the output is a finalizing mix of the new state.
// split(tag) derives an independent child stream from the parent's ORIGINAL
// seed and the tag, so advancing the parent never perturbs its children.

#ifndef MHMS_PRNG_HPP
#define MHMS_PRNG_HPP

#include <cmath>
#include <cstdint>

namespace mhms {

class Prng {
public:
    explicit Prng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0. Modulo reduction; the bias
    /// is below 2^-53 for the desk-scale n used here.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    /// Standard normal deviate (Box-Muller on two uniforms).
    double next_normal() {
        double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    /// Child stream keyed by `tag`, derived from the original seed.
    Prng split(std::uint64_t tag) const {
        Prng mixer(seed_ ^ (0x9E3779B97F4A7C15ULL * (tag + 1)));
        return Prng(mixer.next_u64());
    }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace mhms

#endif  // MHMS_PRNG_HPP
