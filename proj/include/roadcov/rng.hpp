#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace roadcov {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

// Counter-based substream: the state is a pure hash of (seed, tag ids), so
// the same identifiers reproduce the identical draw sequence regardless of
// thread schedule or how many draws sibling substreams consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed, 0x6f4a7c15U)) {}

    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
        std::uint64_t s = seed;
        (void)detail::splitmix64(s);
        for (std::uint64_t t : tags) {
            s ^= t + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
            (void)detail::splitmix64(s);
        }
        state_ = s;
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    // CDF-inversion Poisson sampler. Uses a single uniform, so counts are
    // monotone-coupled in the mean; only usable for small means.
    int poisson_inversion(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        int k = 0;
        while (u > cdf && k < 100000) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

    // General Poisson: splits large means into inversion-friendly chunks.
    int poisson(double mean) {
        int total = 0;
        while (mean > 30.0) {
            total += poisson_inversion(30.0);
            mean -= 30.0;
        }
        return total + poisson_inversion(mean);
    }

    // Unit-mean gamma with integer shape (Nakagami-m power fading).
    double gamma_unit_mean(int shape) {
        double s = 0.0;
        for (int i = 0; i < shape; ++i) s += exponential(1.0);
        return s / shape;
    }

    // Uniform index in [0, n).
    std::size_t pick(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) {
        std::uint64_t s = seed ^ (tag * 0xd1342543de82ef95ULL);
        (void)detail::splitmix64(s);
        return s;
    }

    std::uint64_t state_ = 0;
};

// Substream tags for the simulator components. Keeping components on
// separate substreams means changing one density never shifts the draws of
// another (used for the coupled road-density comparisons).
namespace stream {
inline constexpr std::uint64_t kLines = 1;
inline constexpr std::uint64_t kLinePoints = 2;
inline constexpr std::uint64_t kPalmLine = 3;
inline constexpr std::uint64_t kMacro = 4;
inline constexpr std::uint64_t kUsers = 5;
inline constexpr std::uint64_t kFadingMu = 6;
inline constexpr std::uint64_t kFadingMm = 7;
inline constexpr std::uint64_t kServedUser = 8;
inline constexpr std::uint64_t kOracle = 9;
} // namespace stream

} // namespace roadcov
