#include "decoy/attacks.hpp"

#include <cmath>
#include <sstream>

#include "decoy/errors.hpp"

namespace decoy {

void validate_pns(PnsConfig const& cfg)
{
    auto unit = [](double x) { return x >= 0 && x <= 1; };
    if (!unit(cfg.beta))
        throw ConstraintViolation("PNS blocking probability beta outside [0, 1]");
    if (!unit(cfg.multi_block))
        throw ConstraintViolation("PNS multiphoton blocking fraction outside [0, 1]");
    if (!unit(cfg.forward_efficiency))
        throw ConstraintViolation("PNS forward efficiency outside [0, 1]");
}

namespace {
// Probability that at least one forwarded photon reaches the detectors
double pns_arrival(int photons, PnsConfig const& cfg)
{
    if (photons <= 0)
        return 0;
    if (photons == 1)
        return (1 - cfg.beta) * cfg.forward_efficiency;
    // one photon stays with the adversary
    double const lost_all = std::pow(1 - cfg.forward_efficiency, photons - 1);
    return (1 - cfg.multi_block) * (1 - lost_all);
}
}  // namespace

double pns_yield(int photons, PnsConfig const& cfg, double p_d)
{
    double const a = pns_arrival(photons, cfg);
    return a + (1 - a) * p_d;
}

std::vector<double> pns_yields(PnsConfig const& cfg, double p_d, int max_photons)
{
    validate_pns(cfg);
    std::vector<double> out;
    out.reserve(max_photons + 1);
    for (int i = 0; i <= max_photons; ++i)
        out.push_back(pns_yield(i, cfg, p_d));
    return out;
}

YieldModel pns_yield_model(PnsConfig const& cfg, double p_d)
{
    validate_pns(cfg);
    YieldModel model;
    model.yield = [cfg, p_d](int i) { return pns_yield(i, cfg, p_d); };
    model.error_yield = [cfg, p_d](int i) { return (1 - pns_arrival(i, cfg)) * p_d / 2; };
    return model;
}

namespace {
double pns_signal_gain(double mu, PnsConfig const& cfg, double p_d)
{
    return compose_series(mu, pns_yield_model(cfg, p_d)).gain;
}

// Largest x in [0,1] with gain(x) >= target, for gain decreasing in x
template<class F>
double bisect_decreasing(F gain, double target)
{
    double lo = 0;
    double hi = 1;
    for (int iter = 0; iter < 200 && hi - lo > 0; ++iter)
    {
        double const mid = lo + (hi - lo) / 2;
        if (mid == lo || mid == hi)
            break;
        if (gain(mid) >= target)
            lo = mid;
        else
            hi = mid;
    }
    return std::abs(gain(lo) - target) <= std::abs(gain(hi) - target) ? lo : hi;
}
}  // namespace

PnsConfig pns_solve_beta(ValidatedProfile const& profile,
                         ChannelParams const& params,
                         PnsSolveOptions const& options)
{
    double const target = honest_statistics(profile, params).gain[PulseType::signal];
    double const mu = profile->mu;
    double const p_d = params.p_d;

    PnsConfig cfg;
    cfg.forward_efficiency = options.forward_efficiency;
    validate_pns(cfg);

    double const open_gain = pns_signal_gain(mu, cfg, p_d);
    if (open_gain < target)
    {
        std::ostringstream os;
        os.precision(17);
        os << "PNS gain without blocking (" << open_gain << ") is below the honest gain ("
           << target << "); losses too small to hide the attack";
        throw Infeasible(os.str(), target, open_gain);
    }

    PnsConfig all_singles = cfg;
    all_singles.beta = 1;
    double const singles_gain = pns_signal_gain(mu, all_singles, p_d);
    if (singles_gain <= target)
    {
        cfg.beta = bisect_decreasing(
            [&](double b) {
                PnsConfig c = cfg;
                c.beta = b;
                return pns_signal_gain(mu, c, p_d);
            },
            target);
        return cfg;
    }

    if (!options.allow_multiphoton_blocking)
    {
        std::ostringstream os;
        os.precision(17);
        os << "blocking every single-photon pulse leaves gain " << singles_gain
           << " above the honest gain " << target
           << "; cannot perform a full photon-number splitting attack";
        throw Infeasible(os.str(), target, singles_gain);
    }

    all_singles.multi_block = bisect_decreasing(
        [&](double g) {
            PnsConfig c = all_singles;
            c.multi_block = g;
            return pns_signal_gain(mu, c, p_d);
        },
        target);
    return all_singles;
}

ObservedStatistics pns_statistics(ValidatedProfile const& profile,
                                  PnsConfig const& cfg,
                                  double p_d)
{
    return compose_statistics(profile, pns_yield_model(cfg, p_d));
}

TruthValues pns_truth(ValidatedProfile const& profile, PnsConfig const& cfg, double p_d)
{
    auto const model = pns_yield_model(cfg, p_d);
    TruthValues t;
    t.y0 = model.yield(0);
    t.y1 = model.yield(1);
    t.q1s = profile->mu * std::exp(-profile->mu) * t.y1;
    t.e1x = t.y1 > 0 ? model.error_yield(1) / t.y1 : 0;
    return t;
}

double pns_known_fraction(ValidatedProfile const& profile, PnsConfig const& cfg, double p_d)
{
    double const mu = profile->mu;
    auto const model = pns_yield_model(cfg, p_d);
    double const qs = compose_series(mu, model).gain;
    if (!(qs > 0))
        throw DegenerateChannel("PNS signal gain is zero");
    double const q_low = photon_number_pmf(mu, 0) * model.yield(0)
                         + photon_number_pmf(mu, 1) * model.yield(1);
    return std::max(0.0, 1 - q_low / qs);
}

void validate_bs(BsConfig const& cfg)
{
    if (!(cfg.t >= 0 && cfg.t <= 1))
        throw ConstraintViolation("beam-splitter transmittance outside [0, 1]");
}

BsConfig bs_config(BsMode mode, ChannelParams const& params)
{
    switch (mode)
    {
        case BsMode::eta_T:
            return {system_transmittance(params), mode};
        case BsMode::T_only:
            return {transmittance(params.delta_db_per_km, params.length_km), mode};
        case BsMode::fixed:
            break;
    }
    throw ConfigError("fixed beam-splitter mode needs an explicit transmittance");
}

double bs_effective_transmittance(BsConfig const& cfg, ChannelParams const& params)
{
    validate_bs(cfg);
    return cfg.mode == BsMode::T_only ? cfg.t * params.eta : cfg.t;
}

BsSplit bs_split(int photons, BsConfig const& cfg, RandomStream& rng)
{
    BsSplit out;
    for (int i = 0; i < photons; ++i)
    {
        if (rng.bernoulli(cfg.t))
            ++out.receiver;
        else
            ++out.adversary;
    }
    return out;
}

double bs_eve_ignorance(double t, double mu)
{
    if (!(t >= 0 && t <= 1))
        throw DomainError("beam-splitter transmittance outside [0, 1]");
    if (!(mu >= 0))
        throw DomainError("intensity must be non-negative");
    return std::exp(-(1 - t) * mu);
}

ObservedStatistics bs_statistics(ValidatedProfile const& profile,
                                 BsConfig const& cfg,
                                 ChannelParams const& params)
{
    return compose_statistics(
        profile, physical_yield_model(bs_effective_transmittance(cfg, params), params.p_d));
}

TruthValues bs_truth(ValidatedProfile const& profile,
                     BsConfig const& cfg,
                     ChannelParams const& params)
{
    auto const model
        = physical_yield_model(bs_effective_transmittance(cfg, params), params.p_d);
    TruthValues t;
    t.y0 = model.yield(0);
    t.y1 = model.yield(1);
    t.q1s = profile->mu * std::exp(-profile->mu) * t.y1;
    t.e1x = t.y1 > 0 ? model.error_yield(1) / t.y1 : 0;
    return t;
}

}  // namespace decoy
