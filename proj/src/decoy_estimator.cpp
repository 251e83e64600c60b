#include "decoy/decoy_estimator.hpp"

#include <algorithm>
#include <cmath>

namespace decoy {

// All bracket arithmetic runs in long double: with nu2 ~ 1e-5 the decoy gains
// differ from p_d only in the fourth significant digit.
using real = long double;

namespace {
struct Inputs
{
    real mu, nu1, nu2;
    real qs, q1, q2;
};

Inputs gather(ObservedStatistics const& s, ValidatedProfile const& p)
{
    return {p->mu,
            p->nu1,
            p->nu2,
            s.gain[PulseType::signal],
            s.gain[PulseType::decoy1],
            s.gain[PulseType::decoy2]};
}
}  // namespace

double y0_lower(ObservedStatistics const& stats, ValidatedProfile const& profile)
{
    auto const in = gather(stats, profile);
    real const num = in.nu1 * in.q2 * std::exp(in.nu2) - in.nu2 * in.q1 * std::exp(in.nu1);
    return static_cast<double>(std::max<real>(num / (in.nu1 - in.nu2), 0));
}

double y1_bracket(ObservedStatistics const& stats,
                  ValidatedProfile const& profile,
                  double y0_l)
{
    auto const in = gather(stats, profile);
    real const sq_diff = (in.nu1 - in.nu2) * (in.nu1 + in.nu2);
    real const prefactor = in.mu / (in.mu * (in.nu1 - in.nu2) - sq_diff);
    real const bracket = in.q1 * std::exp(in.nu1) - in.q2 * std::exp(in.nu2)
                         - sq_diff / (in.mu * in.mu) * (in.qs * std::exp(in.mu) - y0_l);
    return static_cast<double>(prefactor * bracket);
}

double y1_lower(ObservedStatistics const& stats,
                ValidatedProfile const& profile,
                double y0_l)
{
    return std::max(y1_bracket(stats, profile, y0_l), 0.0);
}

double q1_lower(double y1_l, double mu)
{
    return mu * std::exp(-mu) * y1_l;
}

std::optional<double> e1_upper(ObservedStatistics const& stats,
                               ValidatedProfile const& profile,
                               double y1_l)
{
    if (!(y1_l > 0))
        return std::nullopt;
    auto const in = gather(stats, profile);
    real const err1 = stats.error_x[PulseType::decoy1];
    real const err2 = stats.error_x[PulseType::decoy2];
    real const num = err1 * in.q1 * std::exp(in.nu1) - err2 * in.q2 * std::exp(in.nu2);
    real const bound = num / ((in.nu1 - in.nu2) * static_cast<real>(y1_l));
    return static_cast<double>(std::clamp<real>(bound, 0, 1));
}

DecoyBounds estimate_bounds(ObservedStatistics const& stats,
                            ValidatedProfile const& profile)
{
    DecoyBounds b;
    b.y0_lower = y0_lower(stats, profile);
    double const bracket = y1_bracket(stats, profile, b.y0_lower);
    b.y1_lower = std::max(bracket, 0.0);
    b.q1s_lower = q1_lower(b.y1_lower, profile->mu);
    b.e1x_upper = e1_upper(stats, profile, b.y1_lower);
    b.saturated = !(bracket > 0) || !b.e1x_upper;
    return b;
}

}  // namespace decoy
