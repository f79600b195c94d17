#include "hhgqo/field.hpp"

#include <cmath>
#include <string>

namespace hhgqo {

void Pulse::validate() const {
    if (!(wavelength_nm > 0.0)) throw std::invalid_argument("pulse: wavelength_nm must be > 0");
    if (!(peak_intensity_W_cm2 > 0.0))
        throw std::invalid_argument("pulse: peak_intensity_W_cm2 must be > 0");
    if (n_cycles < 1) throw std::invalid_argument("pulse: n_cycles must be >= 1");
}

double Pulse::envelope_value(double t) const {
    const double T = t_end();
    if (t <= 0.0 || t >= T) return 0.0;
    const double s = std::sin(units::pi * t / T);
    return s * s;
}

void Molecule::validate() const {
    if (!(interatomic_distance_au > 0.0))
        throw std::invalid_argument("molecule: interatomic distance R must be > 0");
    if (!(softcore_param_au > 0.0))
        throw std::invalid_argument("molecule: soft-core parameter must be > 0");
}

void ModeSet::validate() const {
    if (q_cutoff < 2) throw std::invalid_argument("modes: q_cutoff must be >= 2");
    if (!(omega_L_au > 0.0)) throw std::invalid_argument("modes: omega_L must be > 0");
    if (!(coupling_g0 > 0.0)) throw std::invalid_argument("modes: coupling g0 must be > 0");
}

double classical_field(const Pulse& pulse, double t) {
    const double T = pulse.t_end();
    if (t < 0.0 || t > T)
        throw std::out_of_range("classical_field: t=" + std::to_string(t) +
                                " outside pulse support [0, " + std::to_string(T) + "]");
    return pulse.peak_field() * pulse.envelope_value(t) *
           std::sin(pulse.omega_L() * t + pulse.carrier_phase);
}

std::vector<double> mode_frequencies(const ModeSet& modes) {
    modes.validate();
    std::vector<double> w(modes.q_cutoff);
    for (int q = 1; q <= modes.q_cutoff; ++q) w[q - 1] = modes.omega(q);
    return w;
}

}  // namespace hhgqo
