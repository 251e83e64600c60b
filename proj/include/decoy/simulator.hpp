#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "decoy/attacks.hpp"
#include "decoy/channel_model.hpp"
#include "decoy/decoy_estimator.hpp"
#include "decoy/key_rate.hpp"

namespace decoy {

//! Handling of events where both detectors click.
enum class DoubleClickPolicy
{
    squash,  //!< count as a detection with a uniformly random bit
    discard  //!< treat as no detection
};

struct NoAttack
{
};

using Attack = std::variant<NoAttack, PnsConfig, BsConfig>;

std::string attack_name(Attack const& attack);

struct SimConfig
{
    std::uint64_t n_pulses{1'000'000};
    std::uint64_t seed{1};
    ValidatedProfile profile{validate_profile({})};
    ChannelParams channel{};
    Attack attack{NoAttack{}};
    DoubleClickPolicy double_click{DoubleClickPolicy::squash};
    KeyRateParams rate{};
    //! Pulses per independently seeded chunk; part of the result's identity.
    std::uint64_t chunk_size{1u << 16};
    //! Worker threads (0 = hardware concurrency); never changes the result.
    unsigned workers{0};
};

void validate_sim(SimConfig const& cfg);

struct PulseTally
{
    std::uint64_t sent{0};
    std::uint64_t detected{0};
    std::uint64_t detected_z{0};  //!< both parties chose z
    std::uint64_t detected_x{0};  //!< both parties chose x
    std::uint64_t errors_z{0};
    std::uint64_t errors_x{0};

    bool operator==(PulseTally const&) const = default;
};

struct TallyCounts
{
    PerPulse<PulseTally> per_type;
    std::uint64_t double_clicks{0};

    TallyCounts& operator+=(TallyCounts const& other);
    bool operator==(TallyCounts const&) const = default;
};

/*!
 * Monte Carlo of the decoy-state BB84 quantum stage and sifting.
 *
 * The pulse loop is split into chunks of `chunk_size`; chunk c draws from
 * RandomStream::substream(seed, c) and chunk tallies are merged in chunk
 * order, so the result is independent of the worker count.
 */
TallyCounts run_simulation(SimConfig const& cfg);

//! Tallies of a single chunk; exposed for determinism tests.
TallyCounts simulate_chunk(SimConfig const& cfg, std::uint64_t chunk_index);

/*!
 * Gains and QBERs from counts.
 *
 * A pulse type without x-matched clicks reports E^{vx} = 0. Raises
 * InsufficientData when a type was never sent or the signal never clicked.
 */
ObservedStatistics empirical_statistics(TallyCounts const& tally);

struct AuditLine
{
    std::string quantity;
    double empirical{0};
    double analytic{0};
    double sigma{0};  //!< binomial standard error at the analytic value
    bool pass{false};
};

struct SimulationReport
{
    TallyCounts tally;
    ObservedStatistics empirical;
    DecoyBounds bounds;
    RatePoint rate;
    //! Model expectation for the configured attack (exact yields).
    ObservedStatistics analytic;
    DecoyBounds analytic_bounds;
    RatePoint analytic_rate;
    //! Generator truth values for the bound-validity audit.
    TruthValues truth;
};

SimulationReport end_to_end_report(SimConfig const& cfg);

//! Analytic statistics the simulator samples from for `cfg`.
ObservedStatistics analytic_statistics(SimConfig const& cfg);

TruthValues analytic_truth(SimConfig const& cfg);

//! Compare every gain and x-basis QBER against the analytic model at n_sigma.
std::vector<AuditLine> audit(SimulationReport const& report, double n_sigma);

}  // namespace decoy
