#include "decoy/channel_model.hpp"

#include <cmath>
#include <sstream>

#include "decoy/errors.hpp"

namespace decoy {

void validate_channel(ChannelParams const& c)
{
    auto fail = [](char const* what) {
        throw ConstraintViolation(std::string("channel parameters violate ") + what);
    };
    if (!(c.delta_db_per_km >= 0) || !std::isfinite(c.delta_db_per_km))
        fail("delta >= 0");
    if (!(c.length_km >= 0) || !std::isfinite(c.length_km))
        fail("L >= 0");
    if (!(c.eta >= 0 && c.eta <= 1))
        fail("0 <= eta <= 1");
    if (!(c.p_d >= 0 && c.p_d < 1))
        fail("0 <= p_d < 1");
}

double transmittance(double delta_db_per_km, double length_km)
{
    return std::pow(10.0, -delta_db_per_km * length_km / 10);
}

double system_transmittance(ChannelParams const& c)
{
    return c.eta * transmittance(c.delta_db_per_km, c.length_km);
}

namespace {
// (1 - t)^i computed via log1p so 1 - (1-t)^i stays accurate for tiny t
double miss_all(int photons, double t)
{
    if (photons == 0)
        return 1;
    return std::exp(photons * std::log1p(-t));
}

// 1 - (1 - t)^i without cancellation
double arrive_any(int photons, double t)
{
    if (photons == 0)
        return 0;
    return -std::expm1(photons * std::log1p(-t));
}
}  // namespace

double honest_yield(int photons, ChannelParams const& c, YieldMode mode)
{
    if (photons < 0)
        return 0;
    double const t = system_transmittance(c);
    if (mode == YieldMode::paper)
    {
        if (photons == 0)
            return c.p_d;
        if (photons == 1)
            return c.p_d + t;
        return c.p_d + arrive_any(photons, t);
    }
    return 1 - (1 - c.p_d) * miss_all(photons, t);
}

YieldModel physical_yield_model(double t, double p_d)
{
    YieldModel model;
    model.yield = [t, p_d](int i) {
        return 1 - (1 - p_d) * miss_all(i, t);
    };
    model.error_yield = [t, p_d](int i) {
        double const arrive = arrive_any(i, t);
        return p_d / 2 * (1 - arrive) + p_d / 4 * arrive;
    };
    return model;
}

YieldModel honest_yield_model(ChannelParams const& c, YieldMode mode)
{
    if (mode == YieldMode::exact)
        return physical_yield_model(system_transmittance(c), c.p_d);
    YieldModel model;
    model.yield = [c](int i) { return honest_yield(i, c, YieldMode::paper); };
    model.error_yield = [pd = c.p_d](int) { return pd / 2; };
    return model;
}

SeriesResult compose_series(double intensity, YieldModel const& model)
{
    SeriesResult out;
    long double gain = 0;
    long double error_gain = 0;
    for (int j = 0;; ++j)
    {
        long double const w = photon_number_pmf(intensity, j);
        gain += w * model.yield(j);
        error_gain += w * model.error_yield(j);
        out.terms = j + 1;
        double const tail = poisson_tail_bound(intensity, j);
        if (tail <= 1e-14 * static_cast<double>(gain) || tail < 1e-300 || j > 10000)
            break;
    }
    out.gain = static_cast<double>(gain);
    out.error_gain = static_cast<double>(error_gain);
    return out;
}

ObservedStatistics compose_statistics(ValidatedProfile const& profile,
                                      YieldModel const& model)
{
    ObservedStatistics stats;
    for (auto v : kPulseTypes)
    {
        auto const r = compose_series(profile->intensity(v), model);
        stats.gain[v] = r.gain;
        stats.error_x[v] = r.gain > 0 ? r.error_gain / r.gain : 0;
        if (v == PulseType::signal)
            stats.error_sz = stats.error_x[v];
    }
    return stats;
}

namespace {
void require_nondegenerate(ObservedStatistics const& s)
{
    for (auto v : kPulseTypes)
    {
        if (!(s.gain[v] > 0))
        {
            std::ostringstream os;
            os << "honest gain for " << to_string(v)
               << " pulses is zero; error rates undefined";
            throw DegenerateChannel(os.str());
        }
    }
}
}  // namespace

ObservedStatistics honest_statistics(ValidatedProfile const& profile,
                                     ChannelParams const& c,
                                     YieldMode mode)
{
    validate_channel(c);
    ObservedStatistics stats;
    if (mode == YieldMode::paper)
    {
        double const t = system_transmittance(c);
        for (auto v : kPulseTypes)
        {
            double const q = c.p_d - std::expm1(-t * profile->intensity(v));
            stats.gain[v] = q;
            stats.error_x[v] = q > 0 ? (c.p_d / 2) / q : 0;
        }
        stats.error_sz = stats.error_x[PulseType::signal];
    }
    else
    {
        stats = compose_statistics(profile, honest_yield_model(c, mode));
    }
    require_nondegenerate(stats);
    return stats;
}

TruthValues honest_truth(ValidatedProfile const& profile,
                         ChannelParams const& c,
                         YieldMode mode)
{
    validate_channel(c);
    auto const model = honest_yield_model(c, mode);
    TruthValues truth;
    truth.y0 = model.yield(0);
    truth.y1 = model.yield(1);
    if (!(truth.y1 > 0))
        throw DegenerateChannel("single-photon yield is zero");
    truth.q1s = profile->mu * std::exp(-profile->mu) * truth.y1;
    truth.e1x = model.error_yield(1) / truth.y1;
    return truth;
}

}  // namespace decoy
