#include "hhgqo/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hhgqo {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

void check_mode(int q, std::size_t q_cutoff) {
    if (q < 1 || static_cast<std::size_t>(q) > q_cutoff)
        throw std::out_of_range("mode index q out of range");
}

/// Reduction of a weighted mixture of rank-structured components to one mode.
/// Each component D(chi)(vac|0> + sum one|1_q'>) contributes |one_q|^2 to
/// rho11, vac*conj(one_q) to rho01, and everything else to the vacuum weight.
SingleModeState reduce_components(const std::vector<cdouble>& chi_frame, int q,
                                  const std::vector<const FieldComponent*>& comps,
                                  double total_norm) {
    check_mode(q, chi_frame.size());
    SingleModeState mode;
    mode.q = q;
    mode.center = kSqrt2 * chi_frame[q - 1];
    double r11 = 0.0, rest = 0.0;
    cdouble r01{0.0, 0.0};
    for (const auto* c : comps) {
        const cdouble one_q = c->one[q - 1];
        r11 += std::norm(one_q);
        r01 += c->vac * std::conj(one_q);
        rest += std::norm(c->vac);
        for (std::size_t k = 0; k < c->one.size(); ++k)
            if (static_cast<int>(k) != q - 1) rest += std::norm(c->one[k]);
    }
    mode.rho11 = r11 / total_norm;
    mode.rho01 = r01 / total_norm;
    mode.rho00 = rest / total_norm;
    return mode;
}

}  // namespace

SingleModeState reduce_mode(const DisplacedVacuum& state, int q) {
    check_mode(q, state.chi.size());
    SingleModeState mode;
    mode.q = q;
    mode.center = kSqrt2 * state.chi[q - 1];
    return mode;  // rho00 = 1
}

SingleModeState reduce_mode(const PhotonAddedState& state, int q) {
    if (state.norm_Na <= 0.0)
        throw std::invalid_argument("reduce_mode: photon-added state has zero norm");
    FieldComponent c;
    c.vac = state.H2;
    c.one = state.h1;
    return reduce_components(state.chi_frame, q, {&c}, state.norm_Na);
}

SingleModeState reduce_mode(const ConditionedField& state, int q) {
    FieldComponent c;
    c.vac = state.vac;
    c.one = state.one;
    return reduce_components(state.chi_frame, q, {&c}, 1.0);
}

SingleModeState reduce_mode(const JointState& joint, int q) {
    return reduce_components(joint.chi_frame, q, {&joint.comp_first, &joint.comp_second},
                             joint.total_norm_N);
}

double mean_photon_number(const SingleModeState& mode) {
    // <n> of D(alpha) rho D^dag with rho on {|0>,|1>}: |alpha|^2 + rho11 + 2Re(conj(alpha)<a>)
    const cdouble alpha = mode.center / kSqrt2;
    const cdouble a_mean = std::conj(mode.rho01);  // Tr[rho a] = rho_{10}
    return std::norm(alpha) + mode.rho11 + 2.0 * std::real(std::conj(alpha) * a_mean);
}

double mean_photon_number(const DisplacedVacuum& state, int q) {
    check_mode(q, state.chi.size());
    return std::norm(state.chi[q - 1]);
}

double mean_photon_number(const PhotonAddedState& state, int q) {
    return mean_photon_number(reduce_mode(state, q));
}

double mean_photon_number(const ConditionedField& state, int q) {
    return mean_photon_number(reduce_mode(state, q));
}

SpectrumReport spectrum(const JointState& joint) {
    const JointState& st =
        (joint.basis == ElectronBasis::Energy) ? joint : to_localized(joint);
    SpectrumReport rep;
    const int qc = st.q_cutoff();
    rep.q.resize(qc);
    rep.n_bonding.resize(qc);
    rep.n_antibonding.resize(qc);
    rep.n_total.resize(qc);
    rep.norm_Na = st.comp_second.norm2();
    rep.antibonding_population = rep.norm_Na / st.total_norm_N;
    for (int q = 1; q <= qc; ++q) {
        const double nb = std::norm(st.chi_frame[q - 1]);
        const double na = std::norm(st.comp_second.one[q - 1]);
        rep.q[q - 1] = q;
        rep.n_bonding[q - 1] = nb;
        rep.n_antibonding[q - 1] = na;
        rep.n_total[q - 1] = (nb + na) / st.total_norm_N;
    }
    return rep;
}

double wigner_value(const SingleModeState& mode, cdouble beta) {
    const cdouble delta = beta - mode.center;
    const double d2 = std::norm(delta);
    return std::exp(-d2) / kPi *
           (mode.rho00 + (2.0 * d2 - 1.0) * mode.rho11 +
            2.0 * kSqrt2 * std::real(mode.rho01 * delta));
}

WignerMap wigner_single_mode(const SingleModeState& mode, const WignerGridSpec& grid) {
    if (grid.n_points < 2) throw std::invalid_argument("wigner grid too small");
    WignerMap map;
    map.q = mode.q;
    map.frame_offset = mode.center;
    map.nx = map.ny = grid.n_points;
    const double half = grid.half_widths;
    map.re_beta.resize(map.nx);
    map.im_beta.resize(map.ny);
    const double dx = 2.0 * half / (grid.n_points - 1);
    for (int i = 0; i < map.nx; ++i) map.re_beta[i] = mode.center.real() - half + i * dx;
    for (int i = 0; i < map.ny; ++i) map.im_beta[i] = mode.center.imag() - half + i * dx;
    map.values.resize(static_cast<std::size_t>(map.nx) * map.ny);
    for (int iy = 0; iy < map.ny; ++iy)
        for (int ix = 0; ix < map.nx; ++ix)
            map.values[static_cast<std::size_t>(iy) * map.nx + ix] =
                wigner_value(mode, cdouble(map.re_beta[ix], map.im_beta[iy]));
    map.center_outside_grid =
        mode.center.real() < map.re_beta.front() || mode.center.real() > map.re_beta.back() ||
        mode.center.imag() < map.im_beta.front() || mode.center.imag() > map.im_beta.back();
    return map;
}

double wigner_max(const SingleModeState& mode) {
    // Radially: best direction aligns rho01*delta with the positive axis, so
    // maximize g(r) = e^{-r^2} (A + B r^2 + C r)/pi over r >= 0.
    const double A = mode.rho00 - mode.rho11;
    const double B = 2.0 * mode.rho11;
    const double C = 2.0 * kSqrt2 * std::abs(mode.rho01);
    const auto g = [&](double r) {
        return std::exp(-r * r) * (A + B * r * r + C * r) / kPi;
    };
    if (C == 0.0) {
        // critical points of e^{-s}(A + B s), s = r^2
        double best = g(0.0);
        if (B > 0.0) {
            const double s = 1.0 - A / B;
            if (s > 0.0) best = std::max(best, std::exp(-s) * (A + B * s) / kPi);
        }
        return best;
    }
    const int n = 4096;
    const double r_max = 8.0;
    double best_r = 0.0, best = g(0.0);
    for (int i = 1; i <= n; ++i) {
        const double r = r_max * i / n;
        const double v = g(r);
        if (v > best) {
            best = v;
            best_r = r;
        }
    }
    double lo = std::max(0.0, best_r - r_max / n), hi = best_r + r_max / n;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (g(m1) < g(m2))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, g(0.5 * (lo + hi)));
}

namespace {
void write_or_throw(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

void save_spectrum_csv(const SpectrumReport& report, const std::string& path) {
    std::string text = "q,n_bonding,n_antibonding,n_total\n";
    for (std::size_t i = 0; i < report.q.size(); ++i) {
        text += std::to_string(report.q[i]);
        text += ',';
        text += num(report.n_bonding[i]);
        text += ',';
        text += num(report.n_antibonding[i]);
        text += ',';
        text += num(report.n_total[i]);
        text += '\n';
    }
    write_or_throw(path, text);
}

void save_wigner_csv(const WignerMap& map, const std::string& path) {
    std::string text = "re_beta,im_beta,w\n";
    for (int iy = 0; iy < map.ny; ++iy)
        for (int ix = 0; ix < map.nx; ++ix) {
            text += num(map.re_beta[ix]);
            text += ',';
            text += num(map.im_beta[iy]);
            text += ',';
            text += num(map.values[static_cast<std::size_t>(iy) * map.nx + ix]);
            text += '\n';
        }
    write_or_throw(path, text);
    nlohmann::json meta = {
        {"q", map.q},
        {"nx", map.nx},
        {"ny", map.ny},
        {"frame_offset", {map.frame_offset.real(), map.frame_offset.imag()}},
        {"center_outside_grid", map.center_outside_grid},
        {"convention", "beta = sqrt(2) * coherent amplitude; max coherent W = 1/pi"},
    };
    write_or_throw(path + ".json", meta.dump(2));
}

}  // namespace hhgqo
