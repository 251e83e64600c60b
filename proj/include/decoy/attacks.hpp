#pragma once

#include <utility>

#include "decoy/channel_model.hpp"
#include "decoy/random.hpp"

namespace decoy {

/*!
 * Photon-number-splitting strategy.
 *
 * After a nondemolition photon-number measurement the adversary blocks a
 * fraction `beta` of single-photon pulses and a fraction `multi_block` of
 * multiphoton pulses; from every other multiphoton pulse one photon is kept
 * and the rest forwarded over an ideal line. Forwarded photons reach
 * adversary-substituted detectors with probability `forward_efficiency` and
 * never cause errors. Dark counts (p_d) only matter when nothing arrives.
 */
struct PnsConfig
{
    double beta{0};
    double multi_block{0};
    double forward_efficiency{1};
};

void validate_pns(PnsConfig const& cfg);

//! Click probability Y_i of an i-photon pulse; identical for all pulse types.
double pns_yield(int photons, PnsConfig const& cfg, double p_d);

//! Y_0 .. Y_{max_photons}
std::vector<double> pns_yields(PnsConfig const& cfg, double p_d, int max_photons);

YieldModel pns_yield_model(PnsConfig const& cfg, double p_d);

struct PnsSolveOptions
{
    //! When false only singles may be blocked (beta); Infeasible once beta = 1
    //! still leaves the gain above target.
    bool allow_multiphoton_blocking{true};
    double forward_efficiency{1};
};

/*!
 * Find the strategy whose signal gain equals the honest gain.
 *
 * Blocking singles (beta) is exhausted first; only then multiphoton pulses are
 * blocked. Each stage is solved by bisection (the gain is monotone
 * decreasing in both parameters).
 */
PnsConfig pns_solve_beta(ValidatedProfile const& profile,
                         ChannelParams const& params,
                         PnsSolveOptions const& options = {});

ObservedStatistics pns_statistics(ValidatedProfile const& profile,
                                  PnsConfig const& cfg,
                                  double p_d);

TruthValues pns_truth(ValidatedProfile const& profile, PnsConfig const& cfg, double p_d);

//! Fraction of detected signal pulses that were multiphoton (fully known to the adversary).
double pns_known_fraction(ValidatedProfile const& profile, PnsConfig const& cfg, double p_d);

//! How the beam-splitting adversary picks the transmittance it leaves to the receiver.
enum class BsMode
{
    eta_T,   //!< replaces line and detectors: t = eta T(L)
    T_only,  //!< replaces the line only: t = T(L), detector efficiency stays eta
    fixed    //!< t given explicitly
};

struct BsConfig
{
    double t{1};
    BsMode mode{BsMode::fixed};
};

//! Beam-splitting configuration reproducing the honest loss of `params`.
BsConfig bs_config(BsMode mode, ChannelParams const& params);

void validate_bs(BsConfig const& cfg);

struct BsSplit
{
    int receiver{0};
    int adversary{0};
};

//! Binomial thinning: each photon independently reaches the receiver with probability t.
BsSplit bs_split(int photons, BsConfig const& cfg, RandomStream& rng);

//! H(A|E) for the beam-splitting adversary: e^{-(1-t) mu}.
double bs_eve_ignorance(double t, double mu);

/*!
 * Receiver statistics under the beam-splitting attack.
 *
 * Photons left to the receiver are detected with probability 1 (eta_T,
 * fixed) or eta (T_only); dark counts and double clicks follow the exact
 * honest model.
 */
ObservedStatistics bs_statistics(ValidatedProfile const& profile,
                                 BsConfig const& cfg,
                                 ChannelParams const& params);

TruthValues bs_truth(ValidatedProfile const& profile,
                     BsConfig const& cfg,
                     ChannelParams const& params);

//! Per-photon detection probability seen by the receiver under `cfg`.
double bs_effective_transmittance(BsConfig const& cfg, ChannelParams const& params);

}  // namespace decoy
