// Acceptance checks: one PASS/FAIL line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "decoy/attacks.hpp"
#include "decoy/encoding_equivalence.hpp"
#include "decoy/entropy_oracle.hpp"
#include "decoy/errors.hpp"
#include "decoy/scan.hpp"
#include "decoy/simulator.hpp"

using namespace decoy;

namespace {

struct Outcome
{
    bool pass{true};
    std::ostringstream detail;

    void require(bool ok, std::string const& what)
    {
        if (!ok)
        {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

ChannelParams fig1(double length)
{
    return {0.2, length, 0.1, 1e-6};
}

ValidatedProfile const& fig1_profile()
{
    static auto const p = validate_profile({0.5, 0.01, 0.001});
    return p;
}

double rate_truth(double L)
{
    auto const s = honest_statistics(fig1_profile(), fig1(L));
    auto const t = honest_truth(fig1_profile(), fig1(L));
    return rate_gllp(t.q1s, s.gain[PulseType::signal], t.e1x, s.error_sz, {}).raw;
}

double rate_bs_at(double L, bool line_only)
{
    auto const ch = fig1(L);
    auto const s = honest_statistics(fig1_profile(), ch);
    double const t = line_only ? transmittance(ch.delta_db_per_km, L) : system_transmittance(ch);
    return rate_bs(t, 0.5, s.error_sz, {}).raw;
}

void check_zero_crossing(Outcome& out)
{
    ScanConfig cfg;
    cfg.l_step = 0.1;
    auto const rows = rate_scan(cfg);
    auto const coarse = zero_crossing(rows, Curve::gllp_truth);
    out.require(coarse.has_value(), "R changes sign on [0, 200] km");
    if (!coarse)
        return;
    // refine by bisection on the continuous rate
    double lo = *coarse - 0.2, hi = *coarse + 0.2;
    out.require(rate_truth(lo) > 0 && rate_truth(hi) <= 0, "root bracketed");
    for (int i = 0; i < 100; ++i)
    {
        double const mid = (lo + hi) / 2;
        (rate_truth(mid) > 0 ? lo : hi) = mid;
    }
    out.detail << "L* = " << lo << " km";
    out.require(lo >= 190 && lo <= 210, "L* in [190, 210] km");
}

void check_bs_survives(Outcome& out)
{
    double const r = rate_bs_at(200, false);
    out.detail << "R_BS(t=eta T, L=200) = " << r << ", R(L=200) = " << rate_truth(200);
    out.require(r > 0, "R_BS > 0 at 200 km");
}

void check_strict_suboptimality(Outcome& out)
{
    auto const grid = default_pns_bs_grid();
    try
    {
        auto const rep = compare_pns_bs(grid);
        out.detail << rep.points << " grid points, min(R_BS - R) = " << rep.min_gap
                   << " at mu=" << rep.tightest.mu << ", p_d=" << rep.tightest.p_d
                   << ", L=" << rep.tightest.length_km;
        out.require(rep.points == 201 * 10 * 3, "full grid evaluated");
        out.require(rep.min_gap > 0, "strict inequality");
    }
    catch (AssertionFailure const& e)
    {
        out.require(false, e.what());
    }
}

void check_near_coincidence(Outcome& out)
{
    double worst_a = 0;
    for (double L = 0; L <= 140; L += 0.5)
    {
        double const bs = rate_bs_at(L, false);
        worst_a = std::max(worst_a, (bs - rate_truth(L)) / bs);
    }
    double worst_b = 0;
    for (double L = 120; L <= 200; L += 0.5)
    {
        double const t = rate_bs_at(L, true);
        worst_b = std::max(worst_b, std::abs(t - rate_bs_at(L, false)) / t);
    }
    out.detail << "(a) max (R_BS - R)/R_BS on [0,140] = " << worst_a
               << "; (b) max |R_BS(T) - R_BS(eta T)|/R_BS(T) on [120,200] = " << worst_b;
    out.require(worst_a <= 0.10, "(a) <= 0.10");
    out.require(worst_b <= 0.02, "(b) <= 0.02");
}

void check_bound_validity(Outcome& out)
{
    auto const tiny = validate_profile({0.5, 1e-4, 1e-5});
    double slack_fig1 = 0, slack_tiny = 0;
    int points = 0;
    for (auto mode : {YieldMode::paper, YieldMode::exact})
        for (double L = 0; L <= 150; L += 1)
            for (auto const* prof : {&fig1_profile(), &tiny})
            {
                auto const s = honest_statistics(*prof, fig1(L), mode);
                auto const t = honest_truth(*prof, fig1(L), mode);
                auto const b = estimate_bounds(s, *prof);
                ++points;
                bool const valid = b.y0_lower <= t.y0 && b.y1_lower <= t.y1 && b.e1x_upper
                                   && *b.e1x_upper >= t.e1x;
                if (!valid)
                {
                    std::ostringstream os;
                    os << "validity at L=" << L << " nu1=" << (*prof)->nu1;
                    out.require(false, os.str());
                }
                double const slack = (t.y1 - b.y1_lower) / t.y1;
                double& worst = prof == &tiny ? slack_tiny : slack_fig1;
                worst = std::max(worst, slack);
            }
    out.detail << points << " points; max Y1 slack " << slack_fig1 << " at (0.01, 0.001), "
               << slack_tiny << " at (1e-4, 1e-5)";
    out.require(slack_fig1 <= 0.01, "slack <= 1%");
    out.require(slack_tiny <= 0.001, "slack <= 0.1%");
}

void check_attack_detection(Outcome& out)
{
    auto const& prof = fig1_profile();
    out.detail << "R_decoy pns/honest:";
    for (double L = 25; L <= 150; L += 25)
    {
        auto const pns = pns_solve_beta(prof, fig1(L));
        auto const ps = pns_statistics(prof, pns, 1e-6);
        auto const hs = honest_statistics(prof, fig1(L));
        double const r_pns = rate_decoy(ps, estimate_bounds(ps, prof), {}).raw;
        double const r_honest = rate_decoy(hs, estimate_bounds(hs, prof), {}).raw;
        double const gap = std::abs(ps.gain[PulseType::signal] - hs.gain[PulseType::signal]);
        out.detail << " L=" << L << ": " << r_pns << "/" << r_honest;
        out.require(gap < 1e-12 * hs.gain[PulseType::signal], "signal gain matched");
        out.require(r_pns < r_honest, "R_decoy(PNS) < R_decoy(honest)");
    }
    auto const blocked = pns_statistics(prof, {1.0, 0.0, 1.0}, 1e-6);
    double const y1l = estimate_bounds(blocked, prof).y1_lower;
    out.detail << "; beta=1: Y1_L = " << y1l;
    out.require(y1l <= 10 * 1e-6, "Y1_L <= 10 p_d at beta = 1");
}

void check_monte_carlo(Outcome& out)
{
    SimConfig honest;
    honest.n_pulses = 10'000'000;
    honest.seed = 1;
    honest.channel = fig1(50);
    auto const rep = end_to_end_report(honest);

    double worst = 0;
    for (auto const& line : audit(rep, 4.0))
    {
        if (line.quantity.rfind("E_z", 0) == 0)
            continue;
        worst = std::max(worst, std::abs(line.empirical - line.analytic) / line.sigma);
        out.require(line.pass, line.quantity + " within 4 sigma");
    }

    SimConfig bs = honest;
    bs.seed = 2;
    bs.attack = bs_config(BsMode::eta_T, bs.channel);
    auto const tb = run_simulation(bs);
    auto const eb = empirical_statistics(tb);
    auto const& ea = rep.empirical;
    double worst_two = 0;
    auto const px = honest.profile->p_x();
    for (auto v : kPulseTypes)
    {
        double const na = static_cast<double>(rep.tally.per_type[v].sent);
        double const nb = static_cast<double>(tb.per_type[v].sent);
        double const q = rep.analytic.gain[v];
        double const sq = std::sqrt(q * (1 - q) / na + q * (1 - q) / nb);
        double const e = rep.analytic.error_x[v];
        double const xa = na * q * px * px, xb = nb * q * px * px;
        double const se = std::sqrt(e * (1 - e) / xa + e * (1 - e) / xb);
        double const zq = std::abs(ea.gain[v] - eb.gain[v]) / sq;
        double const ze = std::abs(ea.error_x[v] - eb.error_x[v]) / se;
        worst_two = std::max({worst_two, zq, ze});
        out.require(zq <= 3, "BS gain indistinguishable at 3 sigma");
        out.require(ze <= 3, "BS x-QBER indistinguishable at 3 sigma");
    }
    out.detail << "honest max |z| = " << worst << " (limit 4); BS vs honest max |z| = "
               << worst_two << " (limit 3)";
}

void check_entropy_oracle(Outcome& out)
{
    double worst = 0;
    for (double mu : {0.1, 0.5, 1.0})
        for (double t : {0.0, 1e-5, 0.5, 1.0})
        {
            auto const st = bs_attack_cq_state(mu, t, 20);
            double const err = std::abs(conditional_entropy_cq(st.state) - std::exp(-(1 - t) * mu));
            worst = std::max(worst, err);
        }
    auto const c2 = verify_joint_convexity(1000, 2, 101, 1e-9);
    auto const c3 = verify_joint_convexity(1000, 3, 102, 1e-9);
    auto const vac = verify_vacuum_component_entropy();
    double const vac_err = std::abs(vac.entropy - 1.0);
    out.detail << "max |H(A|E) - e^{-(1-t)mu}| = " << worst << "; convexity violations "
               << c2.violations << "+" << c3.violations << " (max excess " << c2.max_violation
               << ", " << c3.max_violation << "); |H_vac - 1| = " << vac_err;
    out.require(worst <= 1e-6, "BS entropy within 1e-6");
    out.require(c2.violations == 0 && c3.violations == 0, "joint convexity");
    out.require(vac_err <= 1e-12, "vacuum entropy within 1e-12");
}

void check_encoding(Outcome& out)
{
    constexpr double pi = std::numbers::pi;
    struct Row
    {
        int u;
        Basis b;
        double theta;
    };
    double worst = 0, worst_n = 0;
    for (Amplitude alpha : {Amplitude(1, 0), Amplitude(0.4, -0.9), Amplitude(-2.5, 0.3)})
        for (auto const& r : {Row{0, Basis::z, 0}, Row{1, Basis::z, pi / 2},
                              Row{0, Basis::x, pi / 4}, Row{1, Basis::x, -pi / 4}})
        {
            auto const pol = polarization_state(r.u, r.b, alpha);
            auto const circ = to_circular(pol);
            auto const phase = phase_encoding_state(r.u, r.b, alpha);
            auto const g = std::polar(1.0, r.theta);
            worst = std::max({worst, std::abs(phase.alpha1 - g * circ.alpha1),
                              std::abs(phase.alpha2 - g * circ.alpha2)});
            worst_n = std::max(worst_n, std::abs(circ.intensity() - pol.intensity()));
            out.require(equivalent_up_to_global_phase(circ, phase).equivalent,
                        "global-phase equivalence");
        }
    out.detail << "max amplitude error " << worst << ", max intensity change " << worst_n;
    out.require(worst <= 1e-12, "amplitudes within 1e-12");
    out.require(worst_n <= 1e-12, "intensity preserved");
}

struct Criterion
{
    int id;
    char const* name;
    double time_limit_s;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv)
{
    std::vector<Criterion> const criteria{
        {1, "zero crossing of the PNS-optimal rate", 1, check_zero_crossing},
        {2, "beam splitting keeps a key at 200 km", 1, check_bs_survives},
        {3, "beam splitting strictly suboptimal on the grid", 10, check_strict_suboptimality},
        {4, "near-coincidence regimes", 1, check_near_coincidence},
        {5, "decoy bound validity and tightness", 5, check_bound_validity},
        {6, "attack detection", 10, check_attack_detection},
        {7, "Monte Carlo consistency", 60, check_monte_carlo},
        {8, "entropy oracle", 30, check_entropy_oracle},
        {9, "encoding equivalence", 1, check_encoding},
    };

    int only = 0;
    if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0)
        only = std::atoi(argv[2]);
    else if (argc != 1)
    {
        std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
        return 2;
    }

    int failures = 0, ran = 0;
    for (auto const& c : criteria)
    {
        if (only && c.id != only)
            continue;
        ++ran;
        Outcome out;
        out.detail.precision(6);
        auto const t0 = std::chrono::steady_clock::now();
        try
        {
            c.run(out);
        }
        catch (std::exception const& e)
        {
            out.require(false, std::string("exception: ") + e.what());
        }
        double const secs
            = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.time_limit_s)
            out.require(false, "runtime limit " + std::to_string(c.time_limit_s) + " s");
        std::printf("%s criterion %d (%s): %s [%.3f s]\n", out.pass ? "PASS" : "FAIL", c.id,
                    c.name, out.detail.str().c_str(), secs);
        failures += !out.pass;
    }
    if (ran == 0)
    {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return failures ? 1 : 0;
}
