#ifndef HHGQO_ORACLE_HPP
#define HHGQO_ORACLE_HPP

#include <utility>
#include <vector>

#include "hhgqo/qo_state.hpp"

namespace hhgqo {

// Brute-force dense-Fock reference implementations for tiny mode counts.
// Test-support module: correctness over speed everywhere.
//
// A DenseState keeps the excitation tensor *undisplaced* plus a per-mode
// displacement record. Expectation values fold the record in analytically
// (exact Laguerre matrix elements of D(z)), so finite-support states give
// exact answers with no Fock truncation error. fold_displacement() bakes the
// record into the tensor with a truncated-but-unitary matrix exponential for
// the few tests that want explicit Poissonian amplitudes.

struct DenseState {
    int mode_count = 1;
    int fock_cutoff = 4;                 // per-mode levels = fock_cutoff + 1
    std::vector<cdouble> coeff;          // row-major tensor, last mode fastest
    std::vector<cdouble> displacement;   // record d_q, coherent-amplitude units

    int levels() const { return fock_cutoff + 1; }
    std::size_t dim() const;
    std::size_t stride(int mode) const;  // mode is 0-based
    double norm2() const;
};

DenseState densify(const DisplacedVacuum& state, int fock_cutoff);
DenseState densify(const PhotonAddedState& state, int fock_cutoff);  // normalized
DenseState densify(const ConditionedField& state, int fock_cutoff);

/// Bakes the displacement record into the tensor. Guards |d| <= cutoff/3 and
/// asserts the unitarity defect of the truncated exponential is < 1e-8.
void fold_displacement(DenseState& state);

/// Exact matrix element <m|D(z)|n> (generalized Laguerre closed form).
cdouble displacement_element(int m, int n, cdouble z);

struct OperatorSpec {
    enum class Kind { Number, Parity, DisplacedParity } kind = Kind::Number;
    int q = 1;                 // 1-based mode index
    cdouble beta{0.0, 0.0};    // DisplacedParity offset, coherent-amplitude units
};

double dense_expectation(const DenseState& state, const OperatorSpec& op);

/// Wigner value of mode q at phase-space point beta (sqrt(2)-scaled
/// convention): (1/pi) <D(beta/sqrt 2) Pi D^dag>.
double dense_wigner(const DenseState& state, int q, cdouble beta);

/// <a|b>; requires identical mode structure and displacement records.
cdouble dense_overlap(const DenseState& a, const DenseState& b);

/// Reduced density matrix over the modes in set_a (1-based, undisplaced
/// frame; local displacements do not change its spectrum). Row-major.
std::vector<cdouble> dense_reduced_density(
    const std::vector<std::pair<double, DenseState>>& mixture, const std::vector<int>& set_a);

/// Exact negativity (sum of |negative eigenvalues| of the partial transpose
/// over set_a) of a mixture of dense states sharing one displacement record.
double dense_partial_transpose_negativity(
    const std::vector<std::pair<double, DenseState>>& mixture, const std::vector<int>& set_a);

/// <v| PT(mixture) |v> where v is the eigenvector of the most negative
/// partial-transpose eigenvalue of the (pure) witness state. Dense counterpart
/// of the variational negativity lower bound.
double dense_pt_witness_value(const std::vector<std::pair<double, DenseState>>& mixture,
                              const std::vector<int>& set_a, const DenseState& witness);

/// -sum lambda log2 lambda of an arbitrary Hermitian density matrix.
double dense_entropy(const std::vector<cdouble>& rho_row_major);

}  // namespace hhgqo

#endif
