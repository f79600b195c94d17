#ifndef HHGQO_CONSTANTS_HPP
#define HHGQO_CONSTANTS_HPP

#include <cmath>

// Hartree atomic units everywhere inside the library (hbar = e = m_e = 1).
// Conversions live here and are applied only at the I/O boundary.

namespace hhgqo {
namespace units {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light_au = 137.035999084;
inline constexpr double bohr_radius_m = 5.29177210903e-11;
inline constexpr double nm_to_au = 1.0e-9 / bohr_radius_m;     // ~18.897
inline constexpr double au_time_fs = 0.024188843265857;        // 1 a.u. of time in fs
// I[W/cm^2] = atomic_intensity * E0[a.u.]^2
inline constexpr double atomic_intensity_W_cm2 = 3.50944758e16;

/// Central angular frequency (a.u.) of light with wavelength lambda_nm.
inline double omega_from_wavelength_nm(double lambda_nm) {
    return 2.0 * pi * speed_of_light_au / (lambda_nm * nm_to_au);
}

/// Peak field amplitude (a.u.) from peak intensity in W/cm^2.
inline double field_from_intensity_W_cm2(double intensity) {
    return std::sqrt(intensity / atomic_intensity_W_cm2);
}

}  // namespace units
}  // namespace hhgqo

#endif
