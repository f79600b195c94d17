#ifndef HHGQO_FIELD_HPP
#define HHGQO_FIELD_HPP

#include <vector>
#include <stdexcept>

#include "hhgqo/constants.hpp"

namespace hhgqo {

// Driving pulse, two-center molecule and the discrete quantized-mode comb.

enum class Envelope { SinSquared };

struct Pulse {
    double wavelength_nm = 800.0;
    double peak_intensity_W_cm2 = 5.0e14;
    int n_cycles = 8;
    Envelope envelope = Envelope::SinSquared;
    double carrier_phase = 0.0;  // radians, defaults to 0

    void validate() const;

    double omega_L() const { return units::omega_from_wavelength_nm(wavelength_nm); }
    double peak_field() const { return units::field_from_intensity_W_cm2(peak_intensity_W_cm2); }
    double t_start() const { return 0.0; }
    double t_end() const { return n_cycles * 2.0 * units::pi / omega_L(); }
    /// Dimensionless envelope, 0 <= f <= 1, vanishing at both pulse edges.
    double envelope_value(double t) const;
};

struct Molecule {
    double interatomic_distance_au = 2.0;  // R
    // Smoothing a in -1/sqrt(x^2+a^2). Default calibrated so the
    // calibrated so the field-dressed bonding-antibonding gap at R=2.0 sits at
    // 5 wL for the 800 nm, 5e14 W/cm^2 driver; this pins the antibonding
    // emission comb (lines at odd - gap/wL) onto even harmonic orders,
    // mirroring the parity selection rules of the physical molecule.
    double softcore_param_au = 1.570;

    void validate() const;
    double center_right() const { return +0.5 * interatomic_distance_au; }
    double center_left() const { return -0.5 * interatomic_distance_au; }
};

struct ModeSet {
    double omega_L_au = 0.0569541;
    int q_cutoff = 100;        // comb {q*omega_L : q = 1..q_cutoff}
    // effective g(omega_L); absorbs the 1/sqrt(V) quantization-volume factor.
    // Calibrated so single-molecule per-mode photon numbers at the reference
    // pulse run from ~1e-9 on the first plateau (q=3) to ~1e-17 at the cutoff.
    double coupling_g0 = 1e-6;

    void validate() const;
    double omega(int q) const { return q * omega_L_au; }
    /// g(omega_q) = g0 * sqrt(q)  (from the sqrt(hbar*omega) mode expansion factor)
    double coupling(int q) const { return coupling_g0 * std::sqrt(static_cast<double>(q)); }
};

/// Classical driving field E_cl(t) = E0 f(t) sin(w_L t + phi), a.u.
/// Throws if t lies outside the pulse support.
double classical_field(const Pulse& pulse, double t);

/// The comb [w_L, 2 w_L, ..., q_c w_L].
std::vector<double> mode_frequencies(const ModeSet& modes);

}  // namespace hhgqo

#endif
