#include "decoy/encoding_equivalence.hpp"

#include <cmath>

#include "decoy/errors.hpp"

namespace decoy {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Amplitude kI{0, 1};

void check_bit(int u)
{
    if (u != 0 && u != 1)
        throw DomainError("bit value must be 0 or 1");
}
}  // namespace

TwoModeCoherentState polarization_state(int u, Basis b, Amplitude alpha)
{
    check_bit(u);
    TwoModeCoherentState s;
    s.modes = ModePair::horizontal_vertical;
    if (b == Basis::z)
    {
        s.alpha1 = u == 0 ? alpha : Amplitude{};
        s.alpha2 = u == 0 ? Amplitude{} : alpha;
    }
    else
    {
        // D = (H + V)/sqrt2, A = (H - V)/sqrt2
        s.alpha1 = alpha * kInvSqrt2;
        s.alpha2 = (u == 0 ? 1.0 : -1.0) * alpha * kInvSqrt2;
    }
    return s;
}

TwoModeCoherentState to_circular(TwoModeCoherentState const& hv)
{
    if (hv.modes != ModePair::horizontal_vertical)
        throw WrongModeLabels("circular transform expects H/V modes");
    // a_R^dag = (a_H^dag - i a_V^dag)/sqrt2, a_L^dag = (a_H^dag + i a_V^dag)/sqrt2
    TwoModeCoherentState rl;
    rl.modes = ModePair::right_left;
    rl.alpha1 = (hv.alpha1 + kI * hv.alpha2) * kInvSqrt2;
    rl.alpha2 = (hv.alpha1 - kI * hv.alpha2) * kInvSqrt2;
    return rl;
}

TwoModeCoherentState phase_encoding_state(int u, Basis b, Amplitude alpha)
{
    check_bit(u);
    Amplitude const phase = b == Basis::z ? Amplitude{1, 0} : kI;
    TwoModeCoherentState s;
    s.modes = ModePair::time_bins;
    s.alpha1 = (u == 0 ? 1.0 : -1.0) * phase * alpha * kInvSqrt2;
    s.alpha2 = alpha * kInvSqrt2;
    return s;
}

PhaseEquivalence equivalent_up_to_global_phase(TwoModeCoherentState const& s1,
                                               TwoModeCoherentState const& s2,
                                               double tol)
{
    Amplitude const a[2] = {s1.alpha1, s1.alpha2};
    Amplitude const b[2] = {s2.alpha1, s2.alpha2};

    int pivot = -1;
    for (int k = 0; k < 2; ++k)
    {
        if (std::abs(a[k]) > tol)
        {
            pivot = k;
            break;
        }
    }
    if (pivot < 0)
    {
        bool const zero = std::abs(b[0]) <= tol && std::abs(b[1]) <= tol;
        return {zero, 0.0};
    }

    double const theta = std::arg(b[pivot] / a[pivot]);
    Amplitude const rotation = std::polar(1.0, theta);
    PhaseEquivalence out;
    out.phase = theta;
    out.equivalent = std::abs(b[0] - rotation * a[0]) <= tol
                     && std::abs(b[1] - rotation * a[1]) <= tol;
    return out;
}

}  // namespace decoy
