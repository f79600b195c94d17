#ifndef HHGQO_ENTANGLEMENT_HPP
#define HHGQO_ENTANGLEMENT_HPP

#include <array>
#include <string>
#include <vector>

#include "hhgqo/qo_state.hpp"

namespace hhgqo {

/// 2x2 Hermitian density matrix, row-major.
struct QubitDensity {
    std::array<cdouble, 4> m{};  // m[0]=rho00, m[1]=rho01, m[2]=rho10, m[3]=rho11
    std::array<std::string, 2> labels{"0", "1"};

    double trace() const { return (m[0] + m[3]).real(); }
    std::array<double, 2> eigenvalues() const;
};

/// rho_elec = (1/N)[|b><b| + N_a|a><a| + H2|b><a| + H2*|a><b|].
QubitDensity electron_reduced_density(const JointState& joint);

/// -sum lambda log2 lambda. Eigenvalues in [-1e-12, 0) are clipped to zero;
/// anything more negative is an error.
double von_neumann_entropy(const QubitDensity& rho);

struct PartitionSpec {
    enum class Kind { Split, SingleMode } kind = Kind::Split;
    int split_q = 1;  // Split: A = {q <= split_q}; SingleMode: A = {split_q}
};

/// Effective two-qubit pure state of a conditioned field under a frequency
/// partition: coefficients on {|0 0>, |1~_A 0>, |0 1~_B>} (the |1 1> slot is
/// empty at this order).
struct TwoQubitPure {
    double coeff_A = 0.0;   // sqrt(N_A), single collective photon in A
    double coeff_B = 0.0;   // sqrt(N_B)
    cdouble coeff_vac{0.0, 0.0};  // H2 (antibonding) or 1+H2 (localized)
};

TwoQubitPure partition_state(const ConditionedField& state, const PartitionSpec& spec);
double partition_entropy(const ConditionedField& state, const PartitionSpec& spec);

/// log2(2 s1 s2 + 1) for the normalized antibonding component split as mode
/// q_tilde vs the rest; s1 s2 = |h1^(q~)| sqrt(N_Bbar) / N_a is the magnitude
/// of the most negative partial-transpose eigenvalue of that pure state.
struct LognegBound {
    double value = 0.0;
    bool zero_antibonding = false;
};
LognegBound logneg_lower_bound(const JointState& joint, int q_tilde);

/// Exact logarithmic negativity of the full electron-traced field state via a
/// dense partial transpose. Guarded: q_cutoff <= 4 and fock_cutoff <= 4.
double brute_force_logneg(const JointState& joint, int q_tilde, int fock_cutoff);

struct EntanglementReport {
    std::string kind;
    std::vector<double> sweep;   // sweep variable (N_mol, R or q~)
    std::vector<double> values;
    double R = 0.0;
    double n_mol = 1.0;
};

void save_entanglement_csv(const EntanglementReport& report, const std::string& path);

}  // namespace hhgqo

#endif
