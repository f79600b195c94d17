#ifndef HHGQO_DIPOLE_HPP
#define HHGQO_DIPOLE_HPP

#include <complex>
#include <string>
#include <vector>

#include "hhgqo/field.hpp"
#include "hhgqo/grid.hpp"

namespace hhgqo {

// Time series of the dipole matrix elements mu_bb, mu_aa, mu_ab along the
// polarization axis, plus the classical field samples that produced them.
struct DipoleTrace {
    std::vector<double> times;  // uniform step dt
    std::vector<std::complex<double>> mu_bb, mu_aa, mu_ab;
    std::vector<double> e_cl;
    // run metadata
    double R = 0.0;
    double softcore = 0.0;
    Pulse pulse;
    SpatialGrid grid;
    double dt = 0.0;
    double norm_loss_b = 0.0;  // absorbed probability per state
    double norm_loss_a = 0.0;

    std::size_t size() const { return times.size(); }
    void validate() const;
    /// max_t |mu_ab| / max_t |mu_bb| — truncation validity indicator (< 1 required).
    double truncation_ratio() const;
};

struct GroundOrbitalResult {
    Wavefunction psi;
    double energy = 0.0;
    int iterations = 0;
};

/// Ground orbital of a single soft-core center by imaginary-time relaxation.
/// Converged when the energy moves by less than 1e-8 a.u. between iterations.
GroundOrbitalResult ground_orbital(double center_position, const Molecule& mol,
                                   const SpatialGrid& grid);

struct LcaoStates {
    Wavefunction bonding;      // even under x -> -x
    Wavefunction antibonding;  // odd
    double overlap = 0.0;      // S = <g_L|g_R>
    double energy_bonding = 0.0;
    double energy_antibonding = 0.0;
};

/// LCAO bonding/antibonding pair from the two single-center orbitals,
/// symmetrized on the grid so that <psi_b|psi_a> vanishes identically.
LcaoStates build_lcao_states(const Molecule& mol, const SpatialGrid& grid);

/// Orthonormal localized pair Rbar = (b+a)/sqrt2, Lbar = (b-a)/sqrt2.
std::pair<Wavefunction, Wavefunction> localized_states(const Wavefunction& bonding,
                                                       const Wavefunction& antibonding);

struct PropagationOptions {
    double dt = 0.05;
    int q_cutoff_hint = 0;  // if > 0, enforce dt <= 0.02 * 2*pi/(q_c * w_L)
};

/// Split-step spectral propagation of both LCAO states under the
/// semiclassical Hamiltonian; returns the cross/diagonal dipole trace.
DipoleTrace propagate_semiclassical(const Molecule& mol, const Pulse& pulse,
                                    const SpatialGrid& grid, const PropagationOptions& opt);

// --- trace cache (binary, bit-exact round trip) ---
void save_trace(const DipoleTrace& trace, const std::string& path);
DipoleTrace load_trace(const std::string& path);
/// Stable key for cache lookup: hash over {R, softcore, pulse, grid, dt, format version}.
std::string trace_cache_key(const Molecule& mol, const Pulse& pulse, const SpatialGrid& grid,
                            double dt);

}  // namespace hhgqo

#endif
