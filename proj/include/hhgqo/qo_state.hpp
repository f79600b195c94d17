#ifndef HHGQO_QO_STATE_HPP
#define HHGQO_QO_STATE_HPP

#include <string>
#include <vector>

#include "hhgqo/mode_integrals.hpp"

namespace hhgqo {

// Post-interaction field states. Everything lives in the displaced frame and
// is rank-structured: a common multimode displacement D(chi_frame) acting on
// (vac |0...0> + sum_q one[q] |1_q>). States are never expanded into a dense
// Fock tensor outside the brute-force oracle.

struct DisplacedVacuum {
    std::vector<cdouble> chi;   // per-mode displacement, indexed q-1
    double global_phase = 0.0;  // varphi_b; physically irrelevant alone
};

struct PhotonAddedState {
    std::vector<cdouble> chi_frame;  // common frame, = N * chi_b
    std::vector<cdouble> h1;
    cdouble H2{0.0, 0.0};
    double norm_Na = 0.0;  // <Phi_a|Phi_a> before normalization
};

/// Builds the photon-added component and recomputes/asserts
/// norm_Na = sum_q |h1|^2 + |H2|^2.
PhotonAddedState make_photon_added(std::vector<cdouble> chi_frame, std::vector<cdouble> h1,
                                   cdouble H2);

/// One unnormalized field component D(chi_frame)(vac|0> + sum_q one[q]|1_q>).
struct FieldComponent {
    cdouble vac{0.0, 0.0};
    std::vector<cdouble> one;  // length q_cutoff

    double norm2() const {
        double s = std::norm(vac);
        for (const auto& z : one) s += std::norm(z);
        return s;
    }
};

enum class ElectronBasis { Energy, Localized };
enum class ElectronState { Bonding, Antibonding, LocalRight, LocalLeft };

struct JointState {
    ElectronBasis basis = ElectronBasis::Energy;
    std::vector<cdouble> chi_frame;
    double global_phase = 0.0;  // varphi_b, multiplies the whole state
    FieldComponent comp_first;   // b (energy) or R-bar (localized)
    FieldComponent comp_second;  // a (energy) or L-bar (localized)
    double total_norm_N = 1.0;   // 1 + N_a

    int q_cutoff() const { return static_cast<int>(chi_frame.size()); }
};

/// Energy-basis joint state from the bonding displacement and the transition
/// amplitudes. comp_first = |0-bar>, comp_second = sum h1|1_q> + H2|0-bar>,
/// all inside the common frame D(N chi_b).
JointState assemble_joint(const DisplacementSet& chi_b, const TransitionAmplitudes& amps);

/// Hadamard rotation between {b,a} and {R-bar, L-bar}. Involution; preserves
/// chi_frame, global phase and total norm exactly.
JointState to_localized(const JointState& joint);

/// Normalized field state left after projecting the electron.
struct ConditionedField {
    ElectronState selector = ElectronState::Bonding;
    std::vector<cdouble> chi_frame;
    cdouble vac{0.0, 0.0};
    std::vector<cdouble> one;
    double probability = 0.0;  // of the conditioning outcome
};

/// Projective conditioning on an electronic state. Converts basis internally
/// as needed. Throws std::runtime_error on a zero-probability outcome.
ConditionedField condition(const JointState& joint, ElectronState which);

// JSON round-trip for caching and the oracle harness.
std::string joint_to_json(const JointState& joint);
JointState joint_from_json(const std::string& text);

}  // namespace hhgqo

#endif
