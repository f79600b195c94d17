#include "hhgqo/entanglement.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hhgqo/oracle.hpp"

namespace hhgqo {

namespace {
constexpr double kEigClipTol = 1e-12;

double entropy_from_eigs(double l0, double l1) {
    double s = 0.0;
    for (double lam : {l0, l1}) {
        if (lam < -kEigClipTol)
            throw std::runtime_error("von_neumann_entropy: eigenvalue below -1e-12");
        if (lam > 0.0) s -= lam * std::log2(lam);
    }
    return s;
}
}  // namespace

std::array<double, 2> QubitDensity::eigenvalues() const {
    const double tr = (m[0] + m[3]).real();
    const double det = (m[0] * m[3] - m[1] * m[2]).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

QubitDensity electron_reduced_density(const JointState& joint) {
    const JointState& st = (joint.basis == ElectronBasis::Energy) ? joint : to_localized(joint);
    // <Phi_b|Phi_a> = H2 by the overlap identity; computed directly here so it
    // stays valid for hand-built states too.
    const auto& b = st.comp_first;
    const auto& a = st.comp_second;
    cdouble overlap = std::conj(b.vac) * a.vac;
    for (std::size_t q = 0; q < b.one.size(); ++q) overlap += std::conj(b.one[q]) * a.one[q];
    QubitDensity rho;
    rho.labels = {"b", "a"};
    const double inv_n = 1.0 / st.total_norm_N;
    rho.m[0] = inv_n * b.norm2();
    rho.m[3] = inv_n * a.norm2();
    rho.m[1] = inv_n * overlap;        // <b|rho|a> = H2/N
    rho.m[2] = std::conj(rho.m[1]);
    return rho;
}

double von_neumann_entropy(const QubitDensity& rho) {
    if (std::abs(rho.trace() - 1.0) > 1e-10)
        throw std::invalid_argument("von_neumann_entropy: trace != 1");
    const auto eig = rho.eigenvalues();
    return entropy_from_eigs(eig[0], eig[1]);
}

TwoQubitPure partition_state(const ConditionedField& state, const PartitionSpec& spec) {
    const int qc = static_cast<int>(state.one.size());
    if (spec.kind == PartitionSpec::Kind::Split && (spec.split_q < 1 || spec.split_q >= qc))
        throw std::invalid_argument("partition_state: split_q must be in [1, q_cutoff)");
    if (spec.kind == PartitionSpec::Kind::SingleMode && (spec.split_q < 1 || spec.split_q > qc))
        throw std::invalid_argument("partition_state: mode out of range");
    double na = 0.0, nb = 0.0;
    for (int q = 1; q <= qc; ++q) {
        const bool in_a = (spec.kind == PartitionSpec::Kind::Split) ? (q <= spec.split_q)
                                                                    : (q == spec.split_q);
        (in_a ? na : nb) += std::norm(state.one[q - 1]);
    }
    TwoQubitPure out;
    out.coeff_A = std::sqrt(na);
    out.coeff_B = std::sqrt(nb);
    out.coeff_vac = state.vac;
    const double total = na + nb + std::norm(state.vac);
    if (total <= 1e-300) throw std::runtime_error("partition_state: zero total norm");
    const double inv = 1.0 / std::sqrt(total);
    out.coeff_A *= inv;
    out.coeff_B *= inv;
    out.coeff_vac *= inv;
    return out;
}

double partition_entropy(const ConditionedField& state, const PartitionSpec& spec) {
    const TwoQubitPure psi = partition_state(state, spec);
    // |psi> = b|1_A 0_B> + c|0_A 1_B> + d|0_A 0_B>; trace out B:
    // rho_A = [[|d|^2+|c|^2, d conj(b)], [b conj(d), |b|^2]]
    QubitDensity rho;
    rho.labels = {"0_A", "1_A"};
    const double b = psi.coeff_A, c = psi.coeff_B;
    const cdouble d = psi.coeff_vac;
    rho.m[0] = std::norm(d) + c * c;
    rho.m[3] = b * b;
    rho.m[1] = d * b;
    rho.m[2] = std::conj(rho.m[1]);
    return von_neumann_entropy(rho);
}

LognegBound logneg_lower_bound(const JointState& joint, int q_tilde) {
    const JointState& st = (joint.basis == ElectronBasis::Energy) ? joint : to_localized(joint);
    if (q_tilde < 1 || q_tilde > st.q_cutoff())
        throw std::out_of_range("logneg_lower_bound: mode out of range");
    const double na = st.comp_second.norm2();
    LognegBound out;
    if (na <= 0.0) {
        out.zero_antibonding = true;
        return out;
    }
    // For the normalized antibonding pure component split as {q~} vs rest, the
    // Schmidt product is s1 s2 = |h1^(q~)| sqrt(N_Bbar) / N_a with
    // N_Bbar = sum_{q != q~} |h1|^2; the common displacement frame is a local
    // unitary and drops out.
    const cdouble h1q = st.comp_second.one[q_tilde - 1];
    const cdouble h2 = st.comp_second.vac;
    const double h1q2 = std::norm(h1q);
    const double n_bbar = std::max(0.0, na - h1q2 - std::norm(h2));
    const double s1s2 = std::sqrt(h1q2 * n_bbar) / na;
    if (s1s2 <= 0.0) return out;  // product component: no negative PT eigenvalue

    // The bound has to hold against the full mixed state
    //   rho^T = (|Phi_b><Phi_b| + N_a rho_a^T) / N,
    // so evaluate rho^T variationally on the negative PT eigenvector of the
    // antibonding component, v = (|e1 fbar2> - |e2 fbar1>)/sqrt(2) built from
    // its Schmidt data: <v|rho^T|v> = (|<Phi_b|v>|^2 - N_a s1 s2)/N.
    //
    // Reduced matrix of the antibonding component on side A = {q~}, in the
    // basis {|0>, |1_q~>}: rho_A = [[p00, p01], [conj(p01), p11]].
    const double p00 = (std::norm(h2) + n_bbar) / na;
    const double p11 = h1q2 / na;
    const cdouble p01 = std::conj(h1q) * h2 / na;
    const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * s1s2 * s1s2));
    const double lam1 = 0.5 * (1.0 + disc);
    const double lam2 = 0.5 * (1.0 - disc);
    const double s1 = std::sqrt(lam1), s2 = std::sqrt(lam2);
    std::array<std::array<cdouble, 2>, 2> e;  // e[i] = i-th Schmidt vector on A
    if (std::abs(p01) > 1e-300) {
        for (int i = 0; i < 2; ++i) {
            const double lam = (i == 0) ? lam1 : lam2;
            cdouble v0 = p01, v1 = cdouble(lam - p00, 0.0);
            const double nv = std::sqrt(std::norm(v0) + std::norm(v1));
            e[i] = {v0 / nv, v1 / nv};
        }
    } else {
        const bool swap = (p11 > p00);
        e[swap ? 1 : 0] = {cdouble(1.0, 0.0), cdouble(0.0, 0.0)};
        e[swap ? 0 : 1] = {cdouble(0.0, 0.0), cdouble(1.0, 0.0)};
    }
    // B-side Schmidt vectors f_j = (conj(e_j0) phi0 + conj(e_j1) phi1)/s_j with
    // phi0 = (H2|0> + sum_{q != q~} h1_q |1_q>)/sqrt(N_a), phi1 = h1_q~|0>/sqrt(N_a).
    const double sqrt_na = std::sqrt(na);
    const auto& bvac = st.comp_first.vac;
    const auto& bone = st.comp_first.one;
    cdouble s_cross = 0.0;  // sum_{q != q~} conj(b_q) conj(h1_q)
    for (std::size_t q = 0; q < bone.size(); ++q)
        if (static_cast<int>(q) != q_tilde - 1)
            s_cross += std::conj(bone[q]) * std::conj(st.comp_second.one[q]);
    auto overlap_term = [&](int i, int j) {
        const double sj = (j == 0) ? s1 : s2;
        const cdouble fj0 = (std::conj(e[j][0]) * h2 + std::conj(e[j][1]) * h1q) / (sqrt_na * sj);
        return std::conj(fj0) * (std::conj(bvac) * e[i][0] +
                                 std::conj(bone[q_tilde - 1]) * e[i][1]) +
               e[i][0] * e[j][0] * s_cross / (sqrt_na * sj);
    };
    const cdouble ov = (overlap_term(0, 1) - overlap_term(1, 0)) / std::sqrt(2.0);
    const double neg = std::max(0.0, na * s1s2 - std::norm(ov)) / st.total_norm_N;
    out.value = std::log2(2.0 * neg + 1.0);
    return out;
}

double brute_force_logneg(const JointState& joint, int q_tilde, int fock_cutoff) {
    const JointState& st = (joint.basis == ElectronBasis::Energy) ? joint : to_localized(joint);
    if (st.q_cutoff() > 4 || fock_cutoff > 4)
        throw std::invalid_argument("brute_force_logneg: dimension guard exceeded");
    // Electron-traced field state: (|Phi_b><Phi_b| + |Phi_a><Phi_a|)/N in the
    // common displaced frame (dropped: local unitaries preserve negativity).
    ConditionedField cb, ca;
    cb.chi_frame = ca.chi_frame = st.chi_frame;
    cb.vac = st.comp_first.vac;
    cb.one = st.comp_first.one;
    ca.vac = st.comp_second.vac;
    ca.one = st.comp_second.one;
    const double inv_n = 1.0 / st.total_norm_N;
    std::vector<std::pair<double, DenseState>> mixture;
    mixture.emplace_back(inv_n, densify(cb, fock_cutoff));
    mixture.emplace_back(inv_n, densify(ca, fock_cutoff));
    const double neg = dense_partial_transpose_negativity(mixture, {q_tilde});
    return std::log2(2.0 * neg + 1.0);
}

void save_entanglement_csv(const EntanglementReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "sweep_var,value,kind,R,N_mol\n";
    char buf[160];
    for (std::size_t i = 0; i < report.sweep.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%.17g\n", report.sweep[i],
                      report.values[i], report.kind.c_str(), report.R, report.n_mol);
        out << buf;
    }
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace hhgqo
