#include "hhgqo/mode_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hhgqo {

namespace {

void check_uniform(const DipoleTrace& trace) {
    if (trace.size() < 2) throw std::invalid_argument("mode integrals: trace too short");
    const double dt = trace.times[1] - trace.times[0];
    for (std::size_t i = 1; i + 1 < trace.size(); ++i)
        if (std::abs(trace.times[i + 1] - trace.times[i] - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("mode integrals: non-uniform time grid");
}

std::size_t index_of(const DipoleTrace& trace, double t, const char* what) {
    const double dt = trace.times[1] - trace.times[0];
    const double pos = (t - trace.times.front()) / dt;
    const auto i = static_cast<long>(std::llround(pos));
    if (i < 0 || i >= static_cast<long>(trace.size()) || std::abs(pos - i) > 1e-6) {
        std::ostringstream os;
        os << "mode integrals: " << what << "=" << t << " is not a trace sample";
        throw std::invalid_argument(os.str());
    }
    return static_cast<std::size_t>(i);
}

const std::vector<cdouble>& channel(const DipoleTrace& trace, DipoleChannel which) {
    return which == DipoleChannel::Bonding ? trace.mu_bb : trace.mu_aa;
}

/// Trapezoid prefix of f(tau) = e^{i w tau} mu(tau): C[i] = Int_{t0}^{t_i}.
std::vector<cdouble> prefix_fourier(const DipoleTrace& trace, const std::vector<cdouble>& mu,
                                    double omega) {
    const std::size_t n = trace.size();
    const double dt = trace.times[1] - trace.times[0];
    std::vector<cdouble> c(n);
    c[0] = 0.0;
    cdouble prev = std::polar(1.0, omega * trace.times[0]) * mu[0];
    for (std::size_t i = 1; i < n; ++i) {
        const cdouble cur = std::polar(1.0, omega * trace.times[i]) * mu[i];
        c[i] = c[i - 1] + 0.5 * dt * (prev + cur);
        prev = cur;
    }
    return c;
}

// sin^8 taper over [a, b]. The dipole does not return to zero at the end of
// the pulse (residual bound-state ringing after ionization), so the bare
// Fourier integrals pick up a ~1/omega truncation tail that buries the
// harmonic plateau. The taper also de-weights the pulse edges, where the
// AC-Stark-dressed level gap is still sweeping and would smear the comb lines
// across neighbouring harmonic orders. A high-power window keeps the comb
// aligned with the integer orders while leaving peak positions and the
// odd/even selection intact.
double hann(double t, double a, double b) {
    const double s = std::sin(units::pi * (t - a) / (b - a));
    const double s2 = s * s;
    return (s2 * s2) * (s2 * s2);
}

}  // namespace

std::vector<cdouble> chi_displacement(const DipoleTrace& trace, DipoleChannel which,
                                      const ModeSet& modes, double n_mol, double t_from,
                                      double t_to) {
    modes.validate();
    check_uniform(trace);
    std::vector<cdouble> chi(modes.q_cutoff, cdouble(0.0, 0.0));
    if (t_to <= t_from) return chi;  // empty interval
    const std::size_t i0 = index_of(trace, t_from, "t_from");
    const std::size_t i1 = index_of(trace, t_to, "t_to");
    const auto& mu = channel(trace, which);
    const double dt = trace.times[1] - trace.times[0];
    const double scale = (which == DipoleChannel::Bonding) ? n_mol : 1.0;
    for (int q = 1; q <= modes.q_cutoff; ++q) {
        const double w = modes.omega(q);
        cdouble acc = 0.0, prev = 0.0;
        for (std::size_t i = i0; i <= i1; ++i) {
            const double t = trace.times[i];
            const cdouble cur =
                hann(t, t_from, t_to) * std::polar(1.0, w * t) * mu[i];
            if (i > i0) acc += 0.5 * dt * (prev + cur);
            prev = cur;
        }
        chi[q - 1] = -modes.coupling(q) * scale * acc;
    }
    return chi;
}

double phase_phi(const DipoleTrace& trace, DipoleChannel which, const ModeSet& modes,
                 double n_mol, double t) {
    modes.validate();
    check_uniform(trace);
    const std::size_t iend = index_of(trace, t, "t");
    const auto& mu_c = channel(trace, which);
    const double dt = trace.times[1] - trace.times[0];
    std::vector<double> mu(iend + 1);
    for (std::size_t i = 0; i <= iend; ++i) mu[i] = mu_c[i].real();

    double phi = 0.0;
    for (int q = 1; q <= modes.q_cutoff; ++q) {
        const double w = modes.omega(q);
        const double g2 = modes.coupling(q) * modes.coupling(q);
        // sin(w(t1-t2)) = sin(w t1) cos(w t2) - cos(w t1) sin(w t2)
        double inner_cos = 0.0, inner_sin = 0.0;  // trapezoid prefixes over t2
        double prev_c = mu[0] * std::cos(w * trace.times[0]);
        double prev_s = mu[0] * std::sin(w * trace.times[0]);
        double outer = 0.0, prev_outer = 0.0;  // integrand at t1 = t0 is zero (empty inner)
        for (std::size_t i = 1; i <= iend; ++i) {
            const double t1 = trace.times[i];
            const double cur_c = mu[i] * std::cos(w * t1);
            const double cur_s = mu[i] * std::sin(w * t1);
            inner_cos += 0.5 * dt * (prev_c + cur_c);
            inner_sin += 0.5 * dt * (prev_s + cur_s);
            prev_c = cur_c;
            prev_s = cur_s;
            const double f1 = mu[i] * (std::sin(w * t1) * inner_cos - std::cos(w * t1) * inner_sin);
            outer += 0.5 * dt * (prev_outer + f1);
            prev_outer = f1;
        }
        phi += g2 * outer;
    }
    const double scale = (which == DipoleChannel::Bonding) ? n_mol : 1.0;
    return scale * scale * phi;
}

cdouble theta_b(const DipoleTrace& trace, const ModeSet& modes, double n_mol, double t_end,
                double t1) {
    modes.validate();
    check_uniform(trace);
    const std::size_t iend = index_of(trace, t_end, "t_end");
    const std::size_t i1 = index_of(trace, t1, "t1");
    if (i1 > iend) throw std::invalid_argument("theta_b: t1 beyond t_end");
    double im = 0.0;
    for (int q = 1; q <= modes.q_cutoff; ++q) {
        const auto c = prefix_fourier(trace, trace.mu_bb, modes.omega(q));
        const double g = modes.coupling(q);
        const cdouble late = -g * (c[iend] - c[i1]);  // chi(t_end, t1), single molecule
        const cdouble early = -g * c[i1];             // chi(t1, t0)
        im += std::imag(late * std::conj(early));
    }
    return cdouble(0.0, n_mol * n_mol * im);
}

double classical_backaction_field(const DipoleTrace& trace, const ModeSet& modes, double n_mol,
                                  double t) {
    modes.validate();
    check_uniform(trace);
    const std::size_t it = index_of(trace, t, "t");
    double e = 0.0;
    for (int q = 1; q <= modes.q_cutoff; ++q) {
        const auto c = prefix_fourier(trace, trace.mu_bb, modes.omega(q));
        const double g = modes.coupling(q);
        const cdouble chi = -g * c[it];
        // -i g [chi* e^{iwt} - chi e^{-iwt}] = -2 g Im(chi e^{-iwt})
        e += -2.0 * g * std::imag(chi * std::polar(1.0, -modes.omega(q) * t));
    }
    return n_mol * e;
}

TransitionAmplitudes transition_amplitudes(const DipoleTrace& trace, const ModeSet& modes,
                                           double n_mol, double t_end) {
    modes.validate();
    check_uniform(trace);
    if (!(n_mol >= 1.0)) throw std::invalid_argument("transition_amplitudes: n_mol must be >= 1");
    const std::size_t iend = index_of(trace, t_end, "t_end");
    const double dt = trace.times[1] - trace.times[0];
    const int qc = modes.q_cutoff;

    // single-molecule chi prefixes of mu_bb, one row per mode
    std::vector<std::vector<cdouble>> cpre(qc);
    for (int q = 1; q <= qc; ++q) cpre[q - 1] = prefix_fourier(trace, trace.mu_bb, modes.omega(q));

    // backaction phase theta(t1) at single-molecule strength (purely imaginary)
    std::vector<double> theta_im(iend + 1, 0.0);
    for (int q = 0; q < qc; ++q) {
        const auto& c = cpre[q];
        const double g = modes.coupling(q + 1);
        for (std::size_t i = 0; i <= iend; ++i) {
            const cdouble late = -g * (c[iend] - c[i]);
            const cdouble early = -g * c[i];
            theta_im[i] += std::imag(late * std::conj(early));
        }
    }
    for (std::size_t i = 0; i <= iend; ++i)
        if (std::abs(theta_im[i]) > 700.0)
            throw std::runtime_error(
                "transition_amplitudes: |theta_b| exceeds 700; reduce coupling g0 or N_mol");

    TransitionAmplitudes out;
    out.n_mol = n_mol;
    out.h1.assign(qc, cdouble(0.0, 0.0));
    out.h2.assign(qc, cdouble(0.0, 0.0));
    const double sqrt_n = std::sqrt(n_mol);
    const cdouble minus_i(0.0, -1.0);

    for (int q = 1; q <= qc; ++q) {
        const double w = modes.omega(q);
        const double g = modes.coupling(q);
        const auto& c = cpre[q - 1];
        cdouble acc1 = 0.0, acc2 = 0.0;
        cdouble prev1 = 0.0, prev2 = 0.0;
        for (std::size_t i = 0; i <= iend; ++i) {
            const double t1 = trace.times[i];
            const double win = hann(t1, trace.times.front(), t_end);
            const cdouble phase = std::polar(1.0, theta_im[i]);
            const cdouble f1 = phase * g * win * trace.mu_ab[i] * std::polar(1.0, w * t1);
            const cdouble chi1 = -g * c[i];  // chi^(q)(t1, t0), single molecule
            const double e_q = -2.0 * g * std::imag(chi1 * std::polar(1.0, -w * t1));
            const cdouble f2 = phase * win * trace.mu_ab[i] * e_q;
            if (i > 0) {
                acc1 += 0.5 * dt * (prev1 + f1);
                acc2 += 0.5 * dt * (prev2 + f2);
            }
            prev1 = f1;
            prev2 = f2;
        }
        out.h1[q - 1] = minus_i * sqrt_n * acc1;
        out.h2[q - 1] = minus_i * sqrt_n * acc2;
        out.H2 += out.h2[q - 1];
    }
    return out;
}

DisplacementSet displacement_set(const DipoleTrace& trace, DipoleChannel which,
                                 const ModeSet& modes, double n_mol) {
    DisplacementSet out;
    out.source = which;
    out.n_mol = n_mol;
    out.chi =
        chi_displacement(trace, which, modes, n_mol, trace.times.front(), trace.times.back());
    out.phase_phi = phase_phi(trace, which, modes, n_mol, trace.times.back());
    return out;
}

}  // namespace hhgqo
