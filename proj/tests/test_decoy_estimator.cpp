#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decoy/attacks.hpp"
#include "decoy/decoy_estimator.hpp"

using namespace decoy;

namespace {
ChannelParams fig1(double length)
{
    return {0.2, length, 0.1, 1e-6};
}
ValidatedProfile const kProfile = validate_profile({0.5, 0.01, 0.001});
ValidatedProfile const kTinyDecoys = validate_profile({0.5, 1e-4, 1e-5});
}  // namespace

TEST_CASE("y0_lower")
{
    auto const s = honest_statistics(kProfile, fig1(50));
    double const y0 = y0_lower(s, kProfile);
    CHECK(y0 == doctest::Approx(8.999486363059028e-7).epsilon(1e-10));
    CHECK(y0 <= 1e-6);
}

TEST_CASE("y0_lower clamps when decoy 2 is fully blocked")
{
    auto s = honest_statistics(kProfile, fig1(50));
    s.gain[PulseType::decoy2] = 0;
    CHECK(y0_lower(s, kProfile) == 0.0);
}

TEST_CASE("y0_lower with a vacuum decoy returns its gain")
{
    auto const vac = validate_profile({0.5, 0.01, 0.0});
    auto const s = honest_statistics(vac, fig1(50));
    CHECK(s.gain[PulseType::decoy2] == doctest::Approx(1e-6).epsilon(1e-15));
    CHECK(y0_lower(s, vac) == doctest::Approx(s.gain[PulseType::decoy2]).epsilon(1e-15));
}

TEST_CASE("y1_lower")
{
    auto const s = honest_statistics(kProfile, fig1(50));
    double const y1 = y1_lower(s, kProfile, y0_lower(s, kProfile));
    CHECK(y1 == doctest::Approx(0.0099684667457853762).epsilon(1e-10));
    CHECK(y1 <= 0.010001);

    auto const s150 = honest_statistics(kProfile, fig1(150));
    auto const t150 = honest_truth(kProfile, fig1(150));
    double const slack = (t150.y1 - y1_lower(s150, kProfile, y0_lower(s150, kProfile))) / t150.y1;
    CHECK(slack == doctest::Approx(0.0032664).epsilon(1e-4));
}

TEST_CASE("y1_lower when every intensity sees only dark counts")
{
    // Q^v = p_d for all v means Y_i = p_d for all i; the bound must stay below it
    ObservedStatistics s;
    for (auto v : kPulseTypes)
    {
        s.gain[v] = 1e-6;
        s.error_x[v] = 0.5;
    }
    s.error_sz = 0.5;
    double const y1 = y1_lower(s, kProfile, y0_lower(s, kProfile));
    CHECK(y1 >= 0.0);
    CHECK(y1 <= 1e-6);
}

TEST_CASE("y1_lower clamps a negative bracket")
{
    auto s = honest_statistics(kProfile, fig1(50));
    s.gain[PulseType::decoy1] = s.gain[PulseType::decoy2];
    double const y0 = y0_lower(s, kProfile);
    CHECK(y1_bracket(s, kProfile, y0) < 0);
    CHECK(y1_lower(s, kProfile, y0) == 0.0);
    auto const b = estimate_bounds(s, kProfile);
    CHECK(b.saturated);
    CHECK_FALSE(b.e1x_upper.has_value());
}

TEST_CASE("q1_lower")
{
    CHECK(q1_lower(0, 0.5) == 0.0);
    CHECK(q1_lower(0, 0.9) == 0.0);
    CHECK(q1_lower(0.0099684, 0.5) == doctest::Approx(0.0030230701141397075).epsilon(1e-14));
    double prev = -1;
    for (double y = 0; y <= 1; y += 0.05)
    {
        double const q = q1_lower(y, 0.5);
        CHECK(q > prev);
        prev = q;
    }
}

TEST_CASE("e1_upper")
{
    auto const s = honest_statistics(kProfile, fig1(50));
    double const y1 = y1_lower(s, kProfile, y0_lower(s, kProfile));
    auto const e1 = e1_upper(s, kProfile, y1);
    REQUIRE(e1.has_value());
    CHECK(*e1 == doctest::Approx(5.0434965177043987e-5).epsilon(1e-9));
    CHECK(*e1 >= 4.9995000499950005e-5);

    CHECK_FALSE(e1_upper(s, kProfile, 0.0).has_value());

    auto clean = s;
    clean.error_x[PulseType::decoy1] = 0;
    clean.error_x[PulseType::decoy2] = 0;
    auto const zero = e1_upper(clean, kProfile, y1);
    REQUIRE(zero.has_value());
    CHECK(*zero == 0.0);
}

TEST_CASE("estimate_bounds is consistent with the component bounds")
{
    auto const s = honest_statistics(kProfile, fig1(50));
    auto const b = estimate_bounds(s, kProfile);
    CHECK(b.y0_lower == doctest::Approx(8.999486363059028e-7).epsilon(1e-10));
    CHECK(b.y1_lower == doctest::Approx(0.0099684667457853762).epsilon(1e-10));
    CHECK(b.q1s_lower == doctest::Approx(0.0030230903558223261).epsilon(1e-10));
    REQUIRE(b.e1x_upper.has_value());
    CHECK(*b.e1x_upper == doctest::Approx(5.0434965177043987e-5).epsilon(1e-9));
    CHECK_FALSE(b.saturated);
}

TEST_CASE("estimate_bounds tightens as decoy intensities shrink")
{
    for (double L : {0.0, 50.0, 100.0, 150.0})
    {
        auto const s = honest_statistics(kTinyDecoys, fig1(L));
        auto const t = honest_truth(kTinyDecoys, fig1(L));
        auto const b = estimate_bounds(s, kTinyDecoys);
        double const slack = (t.y1 - b.y1_lower) / t.y1;
        CHECK(slack >= 0);
        CHECK(slack < 1e-3);
    }
}

TEST_CASE("estimate_bounds stays valid under PNS statistics")
{
    for (double beta : {0.0, 0.3, 0.9, 1.0})
        for (double gamma : {0.0, 0.5, 0.99})
        {
            PnsConfig const cfg{beta, gamma, 1.0};
            auto const s = pns_statistics(kProfile, cfg, 1e-6);
            auto const t = pns_truth(kProfile, cfg, 1e-6);
            auto const b = estimate_bounds(s, kProfile);
            CAPTURE(beta);
            CAPTURE(gamma);
            CHECK(b.y0_lower <= t.y0 * (1 + 1e-12));
            CHECK(b.y1_lower <= t.y1 * (1 + 1e-12));
            CHECK(b.y1_lower <= (1 - beta) + beta * 1e-6 + 1e-15);
            CHECK(b.q1s_lower <= t.q1s * (1 + 1e-12));
            if (b.e1x_upper)
                CHECK(*b.e1x_upper >= t.e1x * (1 - 1e-12));
        }
}

TEST_CASE("bounds hold on the honest grid in both yield modes")
{
    for (auto mode : {YieldMode::paper, YieldMode::exact})
        for (double L = 0; L <= 150; L += 5)
        {
            auto const s = honest_statistics(kProfile, fig1(L), mode);
            auto const t = honest_truth(kProfile, fig1(L), mode);
            auto const b = estimate_bounds(s, kProfile);
            CAPTURE(L);
            CHECK(b.y0_lower <= t.y0);
            CHECK(b.y1_lower <= t.y1);
            REQUIRE(b.e1x_upper.has_value());
            CHECK(*b.e1x_upper >= t.e1x);
        }
}
