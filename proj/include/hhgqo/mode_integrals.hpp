#ifndef HHGQO_MODE_INTEGRALS_HPP
#define HHGQO_MODE_INTEGRALS_HPP

#include <complex>
#include <vector>

#include "hhgqo/dipole.hpp"
#include "hhgqo/field.hpp"

namespace hhgqo {

using cdouble = std::complex<double>;

enum class DipoleChannel { Bonding, Antibonding };  // mu_bb / mu_aa

// Per-mode coherent displacements chi^(q) accumulated by one dipole channel.
struct DisplacementSet {
    std::vector<cdouble> chi;  // indexed q-1, length q_cutoff
    double phase_phi = 0.0;    // varphi_i(t_end)
    DipoleChannel source = DipoleChannel::Bonding;
    double n_mol = 1.0;
};

// First-order transition amplitudes h1^(q), h2^(q) and their sum H2.
struct TransitionAmplitudes {
    std::vector<cdouble> h1;
    std::vector<cdouble> h2;
    cdouble H2{0.0, 0.0};
    double n_mol = 1.0;

    double norm_excited() const {  // sum_q |h1|^2 + |H2|^2
        double s = std::norm(H2);
        for (const auto& z : h1) s += std::norm(z);
        return s;
    }
};

/// chi_q(t_to, t_from) = -g_q * Integral e^{i w_q tau} mu(tau) dtau,
/// times n_mol for the bonding channel (mu_bb -> N mu_bb).
std::vector<cdouble> chi_displacement(const DipoleTrace& trace, DipoleChannel which,
                                      const ModeSet& modes, double n_mol, double t_from,
                                      double t_to);

/// varphi_i(t): ordered double time integral over sin(w_q (t1-t2)) weighted by
/// the diagonal dipole; scaled n_mol^2 for the bonding channel.
double phase_phi(const DipoleTrace& trace, DipoleChannel which, const ModeSet& modes,
                 double n_mol, double t);

/// theta_b(t_end, t1) = n_mol^2 sum_q (1/2)[chi(t,t1) chi*(t1,t0) - c.c.]; purely imaginary.
cdouble theta_b(const DipoleTrace& trace, const ModeSet& modes, double n_mol, double t_end,
                double t1);

/// Bonding-displacement-induced classical field at time t (real scalar).
double classical_backaction_field(const DipoleTrace& trace, const ModeSet& modes, double n_mol,
                                  double t);

/// h1^(q), h2^(q), H2 at t_end. The backaction phase theta_b and field E_cl^(b)
/// inside the integrals are evaluated at single-molecule strength, so that all
/// amplitudes carry the definitional sqrt(N) scaling exactly.
TransitionAmplitudes transition_amplitudes(const DipoleTrace& trace, const ModeSet& modes,
                                           double n_mol, double t_end);

DisplacementSet displacement_set(const DipoleTrace& trace, DipoleChannel which,
                                 const ModeSet& modes, double n_mol);

}  // namespace hhgqo

#endif
