#include "decoy/simulator.hpp"

#include <cmath>
#include <sstream>

#include "decoy/errors.hpp"
#include "decoy/parallel.hpp"

namespace decoy {

std::string attack_name(Attack const& attack)
{
    if (std::holds_alternative<PnsConfig>(attack))
        return "pns";
    if (std::holds_alternative<BsConfig>(attack))
        return "bs";
    return "none";
}

void validate_sim(SimConfig const& cfg)
{
    if (cfg.n_pulses < 1)
        throw ConstraintViolation("simulation needs n_pulses >= 1");
    if (cfg.chunk_size < 1)
        throw ConstraintViolation("simulation needs chunk_size >= 1");
    validate_channel(cfg.channel);
    validate_rate_params(cfg.rate);
    if (auto const* pns = std::get_if<PnsConfig>(&cfg.attack))
        validate_pns(*pns);
    if (auto const* bs = std::get_if<BsConfig>(&cfg.attack))
        validate_bs(*bs);
    for (auto v : kPulseTypes)
    {
        if (cfg.profile->intensity(v) > kMaxSampledIntensity)
            throw ConstraintViolation("simulation supports intensities up to 10");
    }
}

TallyCounts& TallyCounts::operator+=(TallyCounts const& other)
{
    for (auto v : kPulseTypes)
    {
        auto& a = per_type[v];
        auto const& b = other.per_type[v];
        a.sent += b.sent;
        a.detected += b.detected;
        a.detected_z += b.detected_z;
        a.detected_x += b.detected_x;
        a.errors_z += b.errors_z;
        a.errors_x += b.errors_x;
    }
    double_clicks += other.double_clicks;
    return *this;
}

namespace {
int thin(int photons, double p, RandomStream& rng)
{
    int kept = 0;
    for (int i = 0; i < photons; ++i)
        kept += rng.bernoulli(p) ? 1 : 0;
    return kept;
}

PulseType draw_type(IntensityProfile const& p, RandomStream& rng)
{
    double const u = rng.uniform();
    if (u < p.p_s)
        return PulseType::signal;
    if (u < p.p_s + p.p_d1)
        return PulseType::decoy1;
    return PulseType::decoy2;
}

// Photons reaching the receiver's detectors, and whether the adversary's
// substituted detectors suppress dark counts for them.
struct Arrival
{
    int photons{0};
    bool noiseless{false};
};

struct AttackStage
{
    SimConfig const& cfg;
    double honest_t;

    Arrival operator()(NoAttack, int j, RandomStream& rng) const
    {
        return {thin(j, honest_t, rng), false};
    }

    Arrival operator()(BsConfig const& bs, int j, RandomStream& rng) const
    {
        auto const split = bs_split(j, bs, rng);
        int const received
            = bs.mode == BsMode::T_only ? thin(split.receiver, cfg.channel.eta, rng) : split.receiver;
        return {received, false};
    }

    Arrival operator()(PnsConfig const& pns, int j, RandomStream& rng) const
    {
        if (j == 0)
            return {0, true};
        if (j == 1)
        {
            if (rng.bernoulli(pns.beta))
                return {0, true};
            return {thin(1, pns.forward_efficiency, rng), true};
        }
        if (rng.bernoulli(pns.multi_block))
            return {0, true};
        return {thin(j - 1, pns.forward_efficiency, rng), true};
    }
};
}  // namespace

TallyCounts simulate_chunk(SimConfig const& cfg, std::uint64_t chunk_index)
{
    auto const& profile = cfg.profile.get();
    std::uint64_t const begin = chunk_index * cfg.chunk_size;
    std::uint64_t const end = std::min(cfg.n_pulses, begin + cfg.chunk_size);
    auto rng = RandomStream::substream(cfg.seed, chunk_index);
    AttackStage const stage{cfg, system_transmittance(cfg.channel)};
    double const p_d = cfg.channel.p_d;

    TallyCounts tally;
    for (std::uint64_t n = begin; n < end; ++n)
    {
        PulseType const type = draw_type(profile, rng);
        bool const alice_z = rng.bernoulli(profile.p_z);
        bool const bob_z = rng.bernoulli(profile.p_z);
        int const bit = rng.bernoulli(0.5) ? 1 : 0;
        int const photons = sample_photon_number(profile.intensity(type), rng);

        Arrival const arrival = std::visit(
            [&](auto const& a) { return stage(a, photons, rng); }, cfg.attack);

        bool const matched = alice_z == bob_z;
        bool click[2] = {false, false};
        if (arrival.photons > 0)
        {
            if (matched)
            {
                click[bit] = true;
            }
            else
            {
                for (int i = 0; i < arrival.photons; ++i)
                    click[rng.bernoulli(0.5) ? 1 : 0] = true;
            }
        }
        if (!(arrival.noiseless && arrival.photons > 0) && rng.bernoulli(p_d))
            click[rng.bernoulli(0.5) ? 1 : 0] = true;

        auto& t = tally.per_type[type];
        ++t.sent;
        if (!click[0] && !click[1])
            continue;

        int bob_bit;
        if (click[0] && click[1])
        {
            ++tally.double_clicks;
            // drawn under both policies so they share one random stream
            bob_bit = rng.bernoulli(0.5) ? 1 : 0;
            if (cfg.double_click == DoubleClickPolicy::discard)
                continue;
        }
        else
        {
            bob_bit = click[1] ? 1 : 0;
        }

        ++t.detected;
        if (!matched)
            continue;
        bool const error = bob_bit != bit;
        if (alice_z)
        {
            ++t.detected_z;
            t.errors_z += error;
        }
        else
        {
            ++t.detected_x;
            t.errors_x += error;
        }
    }
    return tally;
}

TallyCounts run_simulation(SimConfig const& cfg)
{
    validate_sim(cfg);
    std::uint64_t const chunks = (cfg.n_pulses + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<TallyCounts> partial(chunks);
    parallel_for(chunks, cfg.workers ? cfg.workers : default_workers(),
                 [&](std::size_t c) { partial[c] = simulate_chunk(cfg, c); });

    TallyCounts total;
    for (auto const& p : partial)
        total += p;
    return total;
}

ObservedStatistics empirical_statistics(TallyCounts const& tally)
{
    auto starved = [](PulseType v, char const* what) {
        std::ostringstream os;
        os << "no " << what << " for " << to_string(v) << " pulses";
        throw InsufficientData(os.str());
    };

    ObservedStatistics stats;
    for (auto v : kPulseTypes)
    {
        auto const& t = tally.per_type[v];
        if (t.sent == 0)
            starved(v, "pulses sent");
        stats.gain[v] = static_cast<double>(t.detected) / static_cast<double>(t.sent);
        // no x-matched clicks: the observed error gain is zero either way
        stats.error_x[v] = t.detected_x == 0 ? 0.0
                                             : static_cast<double>(t.errors_x)
                                                   / static_cast<double>(t.detected_x);
    }
    auto const& s = tally.per_type[PulseType::signal];
    if (s.detected == 0)
        starved(PulseType::signal, "detections");
    if (s.detected_z == 0)
        starved(PulseType::signal, "z-basis matched detections");
    stats.error_sz = static_cast<double>(s.errors_z) / static_cast<double>(s.detected_z);
    return stats;
}

ObservedStatistics analytic_statistics(SimConfig const& cfg)
{
    if (auto const* pns = std::get_if<PnsConfig>(&cfg.attack))
        return pns_statistics(cfg.profile, *pns, cfg.channel.p_d);
    if (auto const* bs = std::get_if<BsConfig>(&cfg.attack))
        return bs_statistics(cfg.profile, *bs, cfg.channel);
    return honest_statistics(cfg.profile, cfg.channel, YieldMode::exact);
}

TruthValues analytic_truth(SimConfig const& cfg)
{
    if (auto const* pns = std::get_if<PnsConfig>(&cfg.attack))
        return pns_truth(cfg.profile, *pns, cfg.channel.p_d);
    if (auto const* bs = std::get_if<BsConfig>(&cfg.attack))
        return bs_truth(cfg.profile, *bs, cfg.channel);
    return honest_truth(cfg.profile, cfg.channel, YieldMode::exact);
}

SimulationReport end_to_end_report(SimConfig const& cfg)
{
    SimulationReport r;
    r.tally = run_simulation(cfg);
    r.empirical = empirical_statistics(r.tally);
    r.bounds = estimate_bounds(r.empirical, cfg.profile);
    r.rate = rate_decoy(r.empirical, r.bounds, cfg.rate);
    r.rate.length_km = cfg.channel.length_km;
    r.analytic = analytic_statistics(cfg);
    r.analytic_bounds = estimate_bounds(r.analytic, cfg.profile);
    r.analytic_rate = rate_decoy(r.analytic, r.analytic_bounds, cfg.rate);
    r.analytic_rate.length_km = cfg.channel.length_km;
    r.truth = analytic_truth(cfg);
    return r;
}

std::vector<AuditLine> audit(SimulationReport const& report, double n_sigma)
{
    std::vector<AuditLine> lines;
    auto add = [&](std::string name, double emp, double ana, std::uint64_t trials) {
        AuditLine line;
        line.quantity = std::move(name);
        line.empirical = emp;
        line.analytic = ana;
        line.sigma = std::sqrt(ana * (1 - ana) / static_cast<double>(trials));
        line.pass = std::abs(emp - ana) <= n_sigma * line.sigma;
        lines.push_back(line);
    };
    for (auto v : kPulseTypes)
    {
        auto const& t = report.tally.per_type[v];
        add("Q_" + std::string(to_string(v)), report.empirical.gain[v], report.analytic.gain[v],
            t.sent);
    }
    for (auto v : kPulseTypes)
    {
        auto const& t = report.tally.per_type[v];
        add("E_x_" + std::string(to_string(v)), report.empirical.error_x[v],
            report.analytic.error_x[v], t.detected_x);
    }
    add("E_z_signal", report.empirical.error_sz, report.analytic.error_sz,
        report.tally.per_type[PulseType::signal].detected_z);
    return lines;
}

}  // namespace decoy
