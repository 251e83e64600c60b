#pragma once

#include <functional>

#include "decoy/source_model.hpp"

namespace decoy {

/*!
 * Fiber and detector constants.
 *
 * p_d is the per-gate probability of a dark count in at least one detector.
 */
struct ChannelParams
{
    double delta_db_per_km{0.2};
    double length_km{0};
    double eta{0.1};
    double p_d{1e-6};
};

void validate_channel(ChannelParams const& params);

/*!
 * Yield model selector.
 *
 * `paper` uses the linearized closed forms (Y_1 = p_d + eta*T); `exact` treats
 * each photon as independently reaching a detector with probability eta*T and
 * a dark count as an independent event.
 */
enum class YieldMode
{
    paper,
    exact
};

//! Per-intensity gains and error rates as seen by the legitimate parties.
struct ObservedStatistics
{
    PerPulse<double> gain;     //!< Q^v, detections per sent pulse
    PerPulse<double> error_x;  //!< E^{vx}, QBER among x-basis matched detections
    double error_sz{0};        //!< E^{sz}, signal QBER in basis z

    bool operator==(ObservedStatistics const&) const = default;
};

//! Known values of the quantities the decoy estimator bounds.
struct TruthValues
{
    double y0{0};
    double y1{0};
    double q1s{0};  //!< single-photon contribution to the signal gain
    double e1x{0};
};

//! 10^{-delta L / 10}
double transmittance(double delta_db_per_km, double length_km);

//! Overall transmittance eta * T(L) of line and detector.
double system_transmittance(ChannelParams const& params);

double honest_yield(int photons, ChannelParams const& params, YieldMode mode);

ObservedStatistics honest_statistics(ValidatedProfile const& profile,
                                     ChannelParams const& params,
                                     YieldMode mode = YieldMode::paper);

TruthValues honest_truth(ValidatedProfile const& profile,
                         ChannelParams const& params,
                         YieldMode mode = YieldMode::paper);

/*!
 * Photon-number-resolved detection model.
 *
 * `yield(i)` is the click probability for an i-photon pulse and
 * `error_yield(i)` = e_i * Y_i the probability of an erroneous click in a
 * matched basis. Both must be intensity independent.
 */
struct YieldModel
{
    std::function<double(int)> yield;
    std::function<double(int)> error_yield;
};

struct SeriesResult
{
    double gain{0};
    double error_gain{0};  //!< E^v Q^v
    int terms{0};
};

/*!
 * Sum the Poisson mixture of a yield model at one intensity.
 *
 * Terms are added until the Poisson tail bound falls below 1e-14 of the
 * partial gain (or below 1e-300 absolutely).
 */
SeriesResult compose_series(double intensity, YieldModel const& model);

//! Statistics for all pulse types from one intensity-independent yield model.
ObservedStatistics compose_statistics(ValidatedProfile const& profile,
                                      YieldModel const& model);

YieldModel honest_yield_model(ChannelParams const& params, YieldMode mode);

/*!
 * Exact detector model at overall per-photon transmittance `t`.
 *
 * Y_i = 1 - (1-p_d)(1-t)^i. A dark click lands in a random detector; next to
 * a photon click it is a double click squashed to a random bit.
 */
YieldModel physical_yield_model(double transmittance, double p_d);

}  // namespace decoy
