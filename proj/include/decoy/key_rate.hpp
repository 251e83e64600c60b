#pragma once

#include <optional>
#include <vector>

#include "decoy/channel_model.hpp"
#include "decoy/decoy_estimator.hpp"

namespace decoy {

struct KeyRateParams
{
    double f{1.0};  //!< error-correction inefficiency, >= 1
    bool clamp_negative{true};
};

void validate_rate_params(KeyRateParams const& params);

/*!
 * Secret key rate per sifted bit.
 *
 * `raw` keeps negative values for diagnostics; `secure` is max(raw, 0) when
 * clamping is enabled.
 */
struct RatePoint
{
    double length_km{0};
    double raw{0};
    double secure{0};
    double privacy_term{0};  //!< first term, adversary ignorance credit
    double leak_term{0};     //!< f * h(E_sz)
};

//! Binary entropy in bits; h(0) = h(1) = 0.
double binary_entropy(double x);

RatePoint rate_gllp(double q1s, double qs, double e1x, double e_sz, KeyRateParams const& params);

//! Rate at the certified bounds; unbounded e1 counts as 1/2.
RatePoint rate_decoy(ObservedStatistics const& stats,
                     DecoyBounds const& bounds,
                     KeyRateParams const& params);

//! e^{-(1-t) mu} - f h(E_sz)
RatePoint rate_bs(double t, double mu, double e_sz, KeyRateParams const& params);

//! Grid for the PNS-vs-BS comparison; every combination is evaluated.
struct PnsBsGrid
{
    std::vector<double> mus;
    std::vector<double> dark_counts;
    std::vector<double> lengths_km;
    double eta{0.1};
    double delta_db_per_km{0.2};
    KeyRateParams rate{};
};

//! Default acceptance grid: L = 0..200 km, mu = 0.1..1.0, p_d in {0, 1e-6, 1e-5}.
PnsBsGrid default_pns_bs_grid();

struct GridPoint
{
    double mu{0};
    double p_d{0};
    double length_km{0};
    double rate{0};     //!< R from honest truth values
    double rate_bs{0};  //!< R_BS at t = eta T
};

struct ComparisonReport
{
    std::size_t points{0};
    double min_gap{0};  //!< min over the grid of R_BS - R
    GridPoint tightest;
};

/*!
 * Check R < R_BS(t = eta T) strictly at every grid point.
 *
 * Raises AssertionFailure naming the first offending point (in grid order).
 */
ComparisonReport compare_pns_bs(PnsBsGrid const& grid, unsigned workers = 0);

}  // namespace decoy
