#pragma once

#include <optional>

#include "decoy/channel_model.hpp"

namespace decoy {

/*!
 * Certified bounds from one signal and two decoy intensities.
 *
 * `e1x_upper` is empty when the single-photon yield bound is zero: no
 * single-photon security credit can be claimed and downstream rates treat the
 * error as 1/2.
 */
struct DecoyBounds
{
    double y0_lower{0};
    double y1_lower{0};
    double q1s_lower{0};
    std::optional<double> e1x_upper;
    //! Set when the Y1 bracket was clamped at zero or e1 is unbounded.
    bool saturated{false};
};

double y0_lower(ObservedStatistics const& stats, ValidatedProfile const& profile);

//! Lower bound on Y1 before clamping; negative under blocking attacks.
double y1_bracket(ObservedStatistics const& stats,
                  ValidatedProfile const& profile,
                  double y0_l);

double y1_lower(ObservedStatistics const& stats,
                ValidatedProfile const& profile,
                double y0_l);

double q1_lower(double y1_l, double mu);

std::optional<double> e1_upper(ObservedStatistics const& stats,
                               ValidatedProfile const& profile,
                               double y1_l);

DecoyBounds estimate_bounds(ObservedStatistics const& stats,
                            ValidatedProfile const& profile);

}  // namespace decoy
