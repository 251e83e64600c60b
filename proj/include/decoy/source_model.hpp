#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "decoy/random.hpp"

namespace decoy {

//! Pulse intensity classes, in fixed (CSV column) order.
enum class PulseType
{
    signal,
    decoy1,
    decoy2
};

inline constexpr std::array<PulseType, 3> kPulseTypes{
    PulseType::signal, PulseType::decoy1, PulseType::decoy2};

constexpr std::size_t index(PulseType v) noexcept
{
    return static_cast<std::size_t>(v);
}

std::string_view to_string(PulseType v) noexcept;

//! One value per pulse type, indexed by PulseType.
template<class T>
struct PerPulse
{
    std::array<T, 3> values{};

    T& operator[](PulseType v) noexcept { return values[index(v)]; }
    T const& operator[](PulseType v) const noexcept { return values[index(v)]; }

    bool operator==(PerPulse const&) const = default;
};

/*!
 * Signal/decoy intensities and the sender's random-choice probabilities.
 *
 * Intensities are mean photon numbers of the phase-randomized source. The
 * selection probabilities only affect Monte Carlo sample sizes.
 */
struct IntensityProfile
{
    double mu{0.5};
    double nu1{0.01};
    double nu2{0.001};
    double p_s{1.0 / 3};
    double p_d1{1.0 / 3};
    double p_d2{1.0 / 3};
    double p_z{0.5};

    double intensity(PulseType v) const noexcept;
    double selection(PulseType v) const noexcept;
    double p_x() const noexcept { return 1 - p_z; }
};

//! An IntensityProfile that passed validate_profile.
class ValidatedProfile
{
  public:
    IntensityProfile const& get() const noexcept { return profile_; }
    IntensityProfile const* operator->() const noexcept { return &profile_; }

  private:
    explicit ValidatedProfile(IntensityProfile p) : profile_(p) {}
    friend ValidatedProfile validate_profile(IntensityProfile const&);

    IntensityProfile profile_;
};

// Check 0 <= nu2 < nu1, nu1 + nu2 < mu, and the probability constraints
ValidatedProfile validate_profile(IntensityProfile const& profile);

//! Largest intensity supported by the sampler.
inline constexpr double kMaxSampledIntensity = 10.0;

/*!
 * Poisson photon-number probability e^{-mu} mu^j / j!.
 *
 * Evaluated in log space so large j neither overflows nor underflows early.
 */
double photon_number_pmf(double intensity, int j);

/*!
 * Draw a photon number by sequential-search inversion of the Poisson CDF.
 *
 * Consumes exactly one uniform variate per call.
 */
int sample_photon_number(double intensity, RandomStream& rng);

//! Upper bound on the Poisson tail mass P(N > j).
double poisson_tail_bound(double intensity, int j);

}  // namespace decoy
