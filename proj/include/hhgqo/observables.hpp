#ifndef HHGQO_OBSERVABLES_HPP
#define HHGQO_OBSERVABLES_HPP

#include <string>
#include <vector>

#include "hhgqo/qo_state.hpp"

namespace hhgqo {

// Photon-number spectra and single-mode Wigner functions.
//
// Phase-space convention: the coordinate beta is sqrt(2) times the coherent
// amplitude, so a coherent state has W(beta) = (1/pi) exp(-|beta - beta0|^2)
// with both max W = 1/pi and integral(W d^2 beta) = 1.

/// Exact single-mode reduced state of any rank-structured field state:
/// D(center) (rho in the {|0>,|1>} subspace) D(center)^dagger.
struct SingleModeState {
    int q = 1;
    cdouble center{0.0, 0.0};  // sqrt(2) * chi_q in beta coordinates
    double rho00 = 1.0;
    double rho11 = 0.0;
    cdouble rho01{0.0, 0.0};
};

SingleModeState reduce_mode(const DisplacedVacuum& state, int q);
SingleModeState reduce_mode(const PhotonAddedState& state, int q);  // normalized by N_a
SingleModeState reduce_mode(const ConditionedField& state, int q);
SingleModeState reduce_mode(const JointState& joint, int q);  // electron traced out

double mean_photon_number(const DisplacedVacuum& state, int q);
double mean_photon_number(const PhotonAddedState& state, int q);
double mean_photon_number(const ConditionedField& state, int q);
double mean_photon_number(const SingleModeState& mode);

struct SpectrumReport {
    std::vector<int> q;
    std::vector<double> n_bonding;      // |N chi_b|^2
    std::vector<double> n_antibonding;  // |h1|^2
    std::vector<double> n_total;        // (n_b + n_a)/(1 + N_a)
    double norm_Na = 0.0;
    double antibonding_population = 0.0;  // N_a/(1+N_a)
};

SpectrumReport spectrum(const JointState& joint);

struct WignerGridSpec {
    int n_points = 201;         // per axis
    double half_widths = 4.0;   // half-size in natural widths around the center
};

struct WignerMap {
    int q = 1;
    int nx = 0, ny = 0;
    std::vector<double> re_beta, im_beta;  // axis ticks
    std::vector<double> values;            // row-major, values[iy*nx+ix]
    cdouble frame_offset{0.0, 0.0};        // state center in beta coordinates
    bool center_outside_grid = false;
};

double wigner_value(const SingleModeState& mode, cdouble beta);
WignerMap wigner_single_mode(const SingleModeState& mode, const WignerGridSpec& grid = {});
double wigner_max(const SingleModeState& mode);

void save_spectrum_csv(const SpectrumReport& report, const std::string& path);
/// Long-format (Re beta, Im beta, W) CSV plus a .json metadata sidecar.
void save_wigner_csv(const WignerMap& map, const std::string& path);

}  // namespace hhgqo

#endif
