#include "decoy/key_rate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "decoy/errors.hpp"
#include "decoy/parallel.hpp"

namespace decoy {

void validate_rate_params(KeyRateParams const& params)
{
    if (!(params.f >= 1) || !std::isfinite(params.f))
        throw ConstraintViolation("key-rate parameters violate f >= 1");
}

double binary_entropy(double x)
{
    if (!(x >= 0 && x <= 1))
    {
        std::ostringstream os;
        os.precision(17);
        os << "binary entropy argument " << x << " outside [0, 1]";
        throw DomainError(os.str());
    }
    if (x == 0 || x == 1)
        return 0;
    return -(x * std::log2(x) + (1 - x) * std::log2(1 - x));
}

namespace {
RatePoint finish(double privacy, double leak, KeyRateParams const& params)
{
    RatePoint r;
    r.privacy_term = privacy;
    r.leak_term = leak;
    r.raw = privacy - leak;
    r.secure = params.clamp_negative ? std::max(r.raw, 0.0) : r.raw;
    return r;
}
}  // namespace

RatePoint rate_gllp(double q1s, double qs, double e1x, double e_sz, KeyRateParams const& params)
{
    validate_rate_params(params);
    if (!(qs > 0))
        throw DomainError("signal gain must be positive");
    if (!(q1s >= 0))
        throw DomainError("single-photon gain must be non-negative");
    double const privacy = q1s / qs * (1 - binary_entropy(e1x));
    return finish(privacy, params.f * binary_entropy(e_sz), params);
}

RatePoint rate_decoy(ObservedStatistics const& stats,
                     DecoyBounds const& bounds,
                     KeyRateParams const& params)
{
    return rate_gllp(bounds.q1s_lower,
                     stats.gain[PulseType::signal],
                     bounds.e1x_upper.value_or(0.5),
                     stats.error_sz,
                     params);
}

RatePoint rate_bs(double t, double mu, double e_sz, KeyRateParams const& params)
{
    validate_rate_params(params);
    if (!(t >= 0 && t <= 1))
        throw DomainError("beam-splitter transmittance outside [0, 1]");
    return finish(std::exp(-(1 - t) * mu), params.f * binary_entropy(e_sz), params);
}

PnsBsGrid default_pns_bs_grid()
{
    PnsBsGrid g;
    for (int i = 1; i <= 10; ++i)
        g.mus.push_back(i / 10.0);
    g.dark_counts = {0.0, 1e-6, 1e-5};
    for (int l = 0; l <= 200; ++l)
        g.lengths_km.push_back(l);
    return g;
}

ComparisonReport compare_pns_bs(PnsBsGrid const& grid, unsigned workers)
{
    std::size_t const n_mu = grid.mus.size();
    std::size_t const n_pd = grid.dark_counts.size();
    std::size_t const n_l = grid.lengths_km.size();
    std::vector<GridPoint> points(n_mu * n_pd * n_l);

    parallel_for(points.size(), workers ? workers : default_workers(), [&](std::size_t k) {
        GridPoint& pt = points[k];
        pt.mu = grid.mus[k / (n_pd * n_l)];
        pt.p_d = grid.dark_counts[(k / n_l) % n_pd];
        pt.length_km = grid.lengths_km[k % n_l];
        if (pt.mu > 1)
            throw DomainError("strict PNS/BS comparison is established only for mu <= 1");

        ChannelParams const channel{grid.delta_db_per_km, pt.length_km, grid.eta, pt.p_d};
        double const t = system_transmittance(channel);
        if (!(t > 0))
            throw DomainError("comparison requires eta T > 0");
        // nu values are irrelevant for the truth-value rate; any valid pair works
        auto const profile = validate_profile({pt.mu, pt.mu / 4, pt.mu / 8});
        auto const stats = honest_statistics(profile, channel);
        auto const truth = honest_truth(profile, channel);
        pt.rate = rate_gllp(truth.q1s, stats.gain[PulseType::signal], truth.e1x,
                            stats.error_sz, grid.rate).raw;
        pt.rate_bs = rate_bs(t, pt.mu, stats.error_sz, grid.rate).raw;
    });

    ComparisonReport report;
    report.points = points.size();
    report.min_gap = std::numeric_limits<double>::infinity();
    for (auto const& pt : points)
    {
        double const gap = pt.rate_bs - pt.rate;
        if (!(gap > 0))
        {
            std::ostringstream os;
            os.precision(17);
            os << "R >= R_BS at mu=" << pt.mu << ", p_d=" << pt.p_d
               << ", L=" << pt.length_km << " km: R=" << pt.rate << ", R_BS=" << pt.rate_bs;
            throw AssertionFailure(os.str());
        }
        if (gap < report.min_gap)
        {
            report.min_gap = gap;
            report.tightest = pt;
        }
    }
    return report;
}

}  // namespace decoy
