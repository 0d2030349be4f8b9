#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace levylab {

// Splittable counter-based generator in the style of SplittableRandom
// (Steele, Lea & Flood): 64-bit state advanced by a per-stream odd gamma,
// output run through a murmur-style finalizer. Replicate streams derived
// from (seed, replicate_index) are statistically independent and do not
// depend on thread scheduling, which is what makes merged Monte Carlo
// results reproducible across worker counts.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(mix64(seed)), gamma_(kGoldenGamma) {}

    RngStream(std::uint64_t state, std::uint64_t gamma) : state_(state), gamma_(gamma | 1ULL) {}

    static RngStream for_replicate(std::uint64_t seed, std::uint64_t replicate) {
        // The root generator would hand out seeds at state + k*gamma; the
        // replicate stream takes the pair of values split() would consume.
        std::uint64_t s1 = seed + (2 * replicate + 1) * kGoldenGamma;
        std::uint64_t s2 = seed + (2 * replicate + 2) * kGoldenGamma;
        return RngStream(mix64(s1), mix_gamma(s2));
    }

    std::uint64_t next_u64() {
        state_ += gamma_;
        return mix64(state_);
    }

    // uniform on (0,1]; strictly positive so it is safe under log()
    double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // uniform on [0,1)
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller; one variate per call, two uniforms consumed
    double next_normal() {
        double u1 = next_unit();
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix_gamma(std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
        z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
        z = (z ^ (z >> 33)) | 1ULL;
        // gammas with too-regular bit patterns get scrambled once more
        if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xAAAAAAAAAAAAAAAAULL;
        return z;
    }

    std::uint64_t state_;
    std::uint64_t gamma_;
};

// Independent sub-seed for a named stage of an experiment (law estimation,
// identity stages, per-level runs, ...), so stages never share streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return RngStream::mix64(seed ^ RngStream::mix64(tag + 0x9E3779B97F4A7C15ULL));
}

}  // namespace levylab
