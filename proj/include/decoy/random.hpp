#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace decoy {

//! SplitMix64 finalizer, used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/*!
 * Seeded random stream owned by a single worker.
 *
 * Uniform variates are built from the top 53 bits of the engine output so the
 * sequence does not depend on the standard library's distribution code.
 */
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

    //! Independent stream for (seed, index), e.g. one per simulation chunk.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index)
    {
        return RandomStream(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
    }

    //! Uniform in [0, 1).
    double uniform() noexcept
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    std::uint64_t bits() noexcept { return engine_(); }

    //! Standard normal via Box-Muller (used only for random test states).
    double normal() noexcept
    {
        constexpr double two_pi = 6.283185307179586476925;
        double const radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
        return radius * std::cos(two_pi * uniform());
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace decoy
