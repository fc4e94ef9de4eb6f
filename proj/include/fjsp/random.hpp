#ifndef FJSP_RANDOM_HPP
#define FJSP_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace fjsp {

// SplitMix64 finalizer. Bijective on 64-bit words, so distinct inputs give
// distinct outputs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random source with platform-stable bounded draws.
///
/// The standard distributions are implementation-defined, so the bounded
/// integer and unit-interval draws are done by hand on top of mt19937_64.
/// Every stochastic routine in the library takes one of these by reference.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, n). Lemire's multiply-shift with rejection.
    std::size_t uniform_index(std::size_t n)
    {
        if (n == 0) {
            throw std::invalid_argument("uniform_index: empty range");
        }
        auto const bound = static_cast<std::uint64_t>(n);
        auto m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            auto const threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    // Uniform in [lo, hi], inclusive.
    std::size_t uniform_between(std::size_t lo, std::size_t hi)
    {
        return lo + uniform_index(hi - lo + 1);
    }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Index drawn with probability proportional to its weight. Weights must be
    // nonnegative with a positive sum.
    std::size_t roulette(std::span<double const> weights)
    {
        double total = 0.0;
        for (double w : weights) {
            total += w;
        }
        if (!(total > 0.0)) {
            throw std::invalid_argument("roulette: weights must have a positive sum");
        }
        double const target = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (target < acc) {
                return i;
            }
        }
        // rounding: fall back to the last positive weight
        for (std::size_t i = weights.size(); i-- > 0;) {
            if (weights[i] > 0.0) {
                return i;
            }
        }
        return weights.size() - 1;
    }

    // Seed for an independent child stream.
    std::uint64_t split() { return splitmix64(next()); }

private:
    std::mt19937_64 engine_;
};

// Seed of the index-th stream derived from a master seed. Distinct indices give
// distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(master) + index);
}

} // namespace fjsp

#endif
