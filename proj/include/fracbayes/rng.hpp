#ifndef FRACBAYES_RNG_HPP_
#define FRACBAYES_RNG_HPP_

#include <cstdint>

namespace fracbayes {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a child stream id from a parent id and an index.  For a fixed
// parent the map index -> stream is injective, so sibling streams are
// always distinct.
constexpr std::uint64_t substream(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(parent + 0x9e3779b97f4a7c15ULL * (index + 1));
}

constexpr std::uint64_t substream(std::uint64_t parent, std::uint64_t a, std::uint64_t b) noexcept {
    return substream(substream(parent, a), b);
}

constexpr std::uint64_t substream(std::uint64_t parent, std::uint64_t a, std::uint64_t b,
                                  std::uint64_t c) noexcept {
    return substream(substream(parent, a, b), c);
}

// Counter-based SplitMix64 stream.  A (seed, stream) pair identifies a
// deterministic sequence; construction is cheap enough to make one per
// observation, candidate, or predictive draw.  All draws from distinct
// streams are independent of evaluation order, which is what makes the
// parallel code reproducible across thread counts.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(substream(mix64(seed ^ 0x517cc1b727220a95ULL), stream)) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform strictly inside (0,1): bin centers of a 2^53 lattice.
    double next_uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double next_normal() noexcept;

    // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape > 0.
    double next_gamma(double shape) noexcept;

    double next_beta(double a, double b) noexcept;

    double next_chi_square(double df) noexcept { return 2.0 * next_gamma(0.5 * df); }

private:
    std::uint64_t state_;
};

}  // namespace fracbayes

#endif  // FRACBAYES_RNG_HPP_
