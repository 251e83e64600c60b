#pragma once

#include <complex>

namespace decoy {

using Amplitude = std::complex<double>;

enum class Basis
{
    z,
    x
};

//! Which pair of modes the two amplitudes refer to.
enum class ModePair
{
    horizontal_vertical,
    right_left,
    time_bins
};

/*!
 * Product of two coherent states |alpha1>|alpha2>.
 *
 * Coherent states are fully described by their amplitudes; the total mean
 * photon number is |alpha1|^2 + |alpha2|^2.
 */
struct TwoModeCoherentState
{
    Amplitude alpha1;
    Amplitude alpha2;
    ModePair modes{ModePair::horizontal_vertical};

    double intensity() const noexcept { return std::norm(alpha1) + std::norm(alpha2); }
};

//! BB84 polarization state for bit u in basis b, in H/V modes.
TwoModeCoherentState polarization_state(int u, Basis b, Amplitude alpha);

//! Re-express an H/V state in circular R/L modes; photon number is preserved.
TwoModeCoherentState to_circular(TwoModeCoherentState const& hv);

//! Two time-bin pulses ((-1)^u e^{i phi_b} alpha/sqrt2, alpha/sqrt2), phi_z = 0, phi_x = pi/2.
TwoModeCoherentState phase_encoding_state(int u, Basis b, Amplitude alpha);

struct PhaseEquivalence
{
    bool equivalent{false};
    double phase{0};  //!< theta with s2 = e^{i theta} s1
};

/*!
 * Whether s2 = e^{i theta} s1 for some theta, within `tol` per component.
 *
 * Mode labels are ignored; the phase is read off the first nonzero component
 * of s1. Zero vectors match only zero vectors.
 */
PhaseEquivalence equivalent_up_to_global_phase(TwoModeCoherentState const& s1,
                                               TwoModeCoherentState const& s2,
                                               double tol = 1e-12);

}  // namespace decoy
