#include "decoy/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "decoy/attacks.hpp"
#include "decoy/decoy_estimator.hpp"
#include "decoy/encoding_equivalence.hpp"
#include "decoy/entropy_oracle.hpp"
#include "decoy/errors.hpp"
#include "decoy/key_rate.hpp"
#include "decoy/parallel.hpp"
#include "decoy/random.hpp"

namespace decoy {

void SuiteReport::fail(std::string message)
{
    passed = false;
    failures.push_back(std::move(message));
}

std::vector<std::string> verify_suite_names()
{
    return {"inequality", "convexity", "encoding", "bounds"};
}

namespace {

SuiteReport inequality_suite(unsigned workers)
{
    SuiteReport rep;
    rep.suite = "inequality";
    auto const grid = default_pns_bs_grid();
    rep.cases = grid.mus.size() * grid.dark_counts.size() * grid.lengths_km.size();
    try
    {
        auto const cmp = compare_pns_bs(grid, workers);
        rep.metrics = {{"min_gap", cmp.min_gap},
                       {"tightest_mu", cmp.tightest.mu},
                       {"tightest_p_d", cmp.tightest.p_d},
                       {"tightest_L_km", cmp.tightest.length_km}};
    }
    catch (AssertionFailure const& e)
    {
        rep.fail(e.what());
    }
    return rep;
}

SuiteReport convexity_suite(std::uint64_t seed, unsigned workers)
{
    SuiteReport rep;
    rep.suite = "convexity";
    for (std::size_t dim : {2u, 3u})
    {
        auto const r = verify_joint_convexity(1000, dim, seed + dim, 1e-9, workers);
        rep.cases += r.trials;
        rep.metrics.emplace_back("max_violation_dim" + std::to_string(dim), r.max_violation);
        if (r.violations)
            rep.fail("joint convexity violated " + std::to_string(r.violations)
                     + " times at dim " + std::to_string(dim) + "; worst instance:\n"
                     + r.counterexample.value_or(""));
    }

    auto const vac = verify_vacuum_component_entropy();
    ++rep.cases;
    rep.metrics.emplace_back("vacuum_entropy", vac.entropy);
    if (!vac.pass)
        rep.fail("vacuum component entropy " + std::to_string(vac.entropy) + " != 1");

    double worst = 0;
    for (double mu : {0.1, 0.5, 1.0})
        for (double t : {0.0, 1e-5, 0.5, 1.0})
        {
            ++rep.cases;
            auto const st = bs_attack_cq_state(mu, t, 20);
            double const h = conditional_entropy_cq(st.state);
            double const err = std::abs(h - bs_eve_ignorance(t, mu));
            worst = std::max(worst, err);
            if (!(err <= 1e-6))
            {
                std::ostringstream os;
                os.precision(17);
                os << "beam-splitting H(A|E) mismatch at mu=" << mu << " t=" << t << ": " << h;
                rep.fail(os.str());
            }
        }
    rep.metrics.emplace_back("bs_entropy_max_error", worst);
    return rep;
}

SuiteReport encoding_suite()
{
    SuiteReport rep;
    rep.suite = "encoding";
    constexpr double pi = std::numbers::pi;
    struct Case
    {
        int u;
        Basis b;
        double theta;
    };
    Case const cases[] = {{0, Basis::z, 0}, {1, Basis::z, pi / 2}, {0, Basis::x, pi / 4},
                          {1, Basis::x, -pi / 4}};
    for (Amplitude alpha : {Amplitude(0.7, 0), Amplitude(0.3, -0.5), Amplitude(1.2, 0.4)})
        for (auto const& c : cases)
        {
            ++rep.cases;
            auto const pol = polarization_state(c.u, c.b, alpha);
            auto const circ = to_circular(pol);
            auto const phase = phase_encoding_state(c.u, c.b, alpha);
            auto const expected = std::polar(1.0, c.theta);
            double const d1 = std::abs(phase.alpha1 - expected * circ.alpha1);
            double const d2 = std::abs(phase.alpha2 - expected * circ.alpha2);
            double const dn = std::abs(circ.intensity() - pol.intensity());
            std::ostringstream os;
            os.precision(17);
            os << "(u=" << c.u << ",b=" << (c.b == Basis::z ? "z" : "x") << ",alpha=" << alpha
               << ")";
            if (!(d1 <= 1e-12 && d2 <= 1e-12))
                rep.fail("phase correspondence off by (" + std::to_string(d1) + ", "
                         + std::to_string(d2) + ") at " + os.str());
            if (!(dn <= 1e-12 * std::max(1.0, pol.intensity())))
                rep.fail("intensity changed under mode change at " + os.str());
            if (!equivalent_up_to_global_phase(circ, phase).equivalent)
                rep.fail("not equivalent up to a global phase at " + os.str());
        }
    return rep;
}

struct BoundCase
{
    std::string label;
    IntensityProfile profile;
    ObservedStatistics stats;
    TruthValues truth;
};

// a <= b up to rounding at the scale of b
bool below(double a, double b)
{
    return a <= b + 1e-10 * std::abs(b) + 1e-300;
}

BoundCase draw_bound_case(std::size_t i, std::uint64_t seed)
{
    RandomStream rng = RandomStream::substream(seed, i);
    IntensityProfile p;
    p.mu = 0.05 + 0.95 * rng.uniform();
    p.nu1 = p.mu * (0.001 + 0.499 * rng.uniform());
    p.nu2 = p.nu1 * 0.95 * rng.uniform();
    auto const profile = validate_profile(p);

    double const p_d = rng.uniform() < 0.2 ? 0.0 : std::pow(10.0, -8 + 4 * rng.uniform());
    ChannelParams ch{0.2, 200 * rng.uniform(), 0.05 + 0.95 * rng.uniform(), p_d};

    std::ostringstream os;
    os.precision(17);
    os << "mu=" << p.mu << " nu1=" << p.nu1 << " nu2=" << p.nu2 << " p_d=" << p_d
       << " L=" << ch.length_km << " eta=" << ch.eta;

    BoundCase out{"", p, {}, {}};
    switch (i % 4)
    {
    case 0:
    case 1: {
        auto const mode = i % 4 == 0 ? YieldMode::paper : YieldMode::exact;
        out.stats = honest_statistics(profile, ch, mode);
        out.truth = honest_truth(profile, ch, mode);
        os << (mode == YieldMode::paper ? " honest/paper" : " honest/exact");
        break;
    }
    case 2: {
        PnsConfig cfg{rng.uniform(), rng.uniform(), 0.05 + 0.95 * rng.uniform()};
        out.stats = pns_statistics(profile, cfg, p_d);
        out.truth = pns_truth(profile, cfg, p_d);
        os << " pns beta=" << cfg.beta << " multi_block=" << cfg.multi_block
           << " forward=" << cfg.forward_efficiency;
        break;
    }
    default: {
        BsConfig cfg{0.01 + 0.99 * rng.uniform(), BsMode::fixed};
        out.stats = bs_statistics(profile, cfg, ch);
        out.truth = bs_truth(profile, cfg, ch);
        os << " bs t=" << cfg.t;
        break;
    }
    }
    out.label = os.str();
    return out;
}

SuiteReport bounds_suite(std::uint64_t seed, unsigned workers)
{
    SuiteReport rep;
    rep.suite = "bounds";
    constexpr std::size_t n = 1200;
    std::vector<std::string> problems(n);
    std::vector<double> slack(n, 0);

    parallel_for(n, workers, [&](std::size_t i) {
        BoundCase c;
        try
        {
            c = draw_bound_case(i, seed);
        }
        catch (DegenerateChannel const&)
        {
            return;  // no clicks at all: nothing to bound
        }
        auto const profile = validate_profile(c.profile);
        auto const b = estimate_bounds(c.stats, profile);
        std::string msg;
        if (!below(b.y0_lower, c.truth.y0))
            msg += " Y0_L > Y0;";
        if (!below(b.y1_lower, c.truth.y1))
            msg += " Y1_L > Y1;";
        if (!below(b.q1s_lower, c.truth.q1s))
            msg += " Q1s_L > Q1s;";
        if (b.e1x_upper && !below(c.truth.e1x, *b.e1x_upper))
            msg += " e1x_U < e1x;";
        if (!msg.empty())
            problems[i] = c.label + ":" + msg;
        if (c.truth.y1 > 0)
            slack[i] = (c.truth.y1 - b.y1_lower) / c.truth.y1;
    });

    rep.cases = n;
    double min_slack = 1;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!problems[i].empty())
            rep.fail(problems[i]);
        min_slack = std::min(min_slack, slack[i]);
    }
    rep.metrics.emplace_back("min_relative_y1_slack", min_slack);
    return rep;
}

}  // namespace

SuiteReport run_verify_suite(std::string const& name, std::uint64_t seed, unsigned workers)
{
    if (name == "inequality")
        return inequality_suite(workers);
    if (name == "convexity")
        return convexity_suite(seed, workers);
    if (name == "encoding")
        return encoding_suite();
    if (name == "bounds")
        return bounds_suite(seed, workers);
    throw ConfigError("unknown verify suite '" + name
                      + "' (expected inequality, convexity, encoding or bounds)");
}

}  // namespace decoy
