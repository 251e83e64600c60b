#include "decoy/source_model.hpp"

#include <cmath>
#include <sstream>

#include "decoy/errors.hpp"

namespace decoy {

std::string_view to_string(PulseType v) noexcept
{
    switch (v)
    {
        case PulseType::signal:
            return "signal";
        case PulseType::decoy1:
            return "decoy1";
        case PulseType::decoy2:
            return "decoy2";
    }
    return "?";
}

double IntensityProfile::intensity(PulseType v) const noexcept
{
    switch (v)
    {
        case PulseType::signal:
            return mu;
        case PulseType::decoy1:
            return nu1;
        case PulseType::decoy2:
            return nu2;
    }
    return 0;
}

double IntensityProfile::selection(PulseType v) const noexcept
{
    switch (v)
    {
        case PulseType::signal:
            return p_s;
        case PulseType::decoy1:
            return p_d1;
        case PulseType::decoy2:
            return p_d2;
    }
    return 0;
}

namespace {
[[noreturn]] void reject(std::string const& inequality, IntensityProfile const& p)
{
    std::ostringstream os;
    os.precision(17);
    os << "intensity profile violates " << inequality << " (mu=" << p.mu
       << ", nu1=" << p.nu1 << ", nu2=" << p.nu2 << ", p_s=" << p.p_s
       << ", p_d1=" << p.p_d1 << ", p_d2=" << p.p_d2 << ", p_z=" << p.p_z << ")";
    throw ConstraintViolation(os.str());
}

bool open_unit(double p)
{
    return p > 0 && p < 1;
}
}  // namespace

ValidatedProfile validate_profile(IntensityProfile const& p)
{
    if (!std::isfinite(p.mu) || !std::isfinite(p.nu1) || !std::isfinite(p.nu2))
        reject("finite intensities", p);
    if (!(0 <= p.nu2))
        reject("0 <= nu2", p);
    if (!(p.nu2 < p.nu1))
        reject("nu2 < nu1", p);
    if (!(p.nu1 + p.nu2 < p.mu))
        reject("nu1 + nu2 < mu", p);
    if (!open_unit(p.p_s) || !open_unit(p.p_d1) || !open_unit(p.p_d2))
        reject("0 < p_v < 1", p);
    if (std::abs(p.p_s + p.p_d1 + p.p_d2 - 1) > 1e-12)
        reject("p_s + p_d1 + p_d2 = 1", p);
    if (!open_unit(p.p_z))
        reject("0 < p_z < 1", p);
    return ValidatedProfile(p);
}

double photon_number_pmf(double intensity, int j)
{
    if (j < 0)
        return 0;
    if (intensity == 0)
        return j == 0 ? 1.0 : 0.0;
    return std::exp(j * std::log(intensity) - intensity - std::lgamma(j + 1.0));
}

double poisson_tail_bound(double intensity, int j)
{
    // P(N > j) <= pmf(j+1) / (1 - mu/(j+2)) once the terms decay geometrically
    if (intensity == 0)
        return 0;
    double const ratio = intensity / (j + 2.0);
    if (ratio >= 1)
        return 1;
    return photon_number_pmf(intensity, j + 1) / (1 - ratio);
}

int sample_photon_number(double intensity, RandomStream& rng)
{
    if (!(intensity >= 0) || intensity > kMaxSampledIntensity)
        throw DomainError("photon-number sampling supports 0 <= mu <= 10");

    double const u = rng.uniform();
    if (intensity == 0)
        return 0;

    double term = std::exp(-intensity);
    double cdf = term;
    int k = 0;
    // The cap only triggers when rounding leaves the CDF just below u ~ 1
    while (u >= cdf && k < 200)
    {
        ++k;
        term *= intensity / k;
        cdf += term;
    }
    return k;
}

}  // namespace decoy
