#include "hhgqo/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace hhgqo {

namespace {

constexpr int kMaxModes = 4;
constexpr int kMaxCutoff = 8;

void check_geometry(int mode_count, int fock_cutoff) {
    if (mode_count < 1 || mode_count > kMaxModes)
        throw std::invalid_argument("DenseState: mode_count must be 1..4");
    if (fock_cutoff < 1 || fock_cutoff > kMaxCutoff)
        throw std::invalid_argument("DenseState: fock_cutoff must be 1..8");
}

std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

DenseState densify_component(const std::vector<cdouble>& chi_frame, cdouble vac,
                             const std::vector<cdouble>& one, double inv_norm, int fock_cutoff) {
    const int m = static_cast<int>(chi_frame.size());
    check_geometry(m, fock_cutoff);
    DenseState st;
    st.mode_count = m;
    st.fock_cutoff = fock_cutoff;
    st.displacement = chi_frame;
    st.coeff.assign(st.dim(), cdouble(0.0, 0.0));
    st.coeff[0] = inv_norm * vac;
    for (int q = 0; q < m; ++q) st.coeff[st.stride(q)] = inv_norm * one[q];
    return st;
}

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Truncated-but-unitary exp(d a^dag - conj(d) a) on the level space.
Mat displacement_unitary(cdouble d, int levels) {
    Mat k = Mat::Zero(levels, levels);
    for (int n = 0; n + 1 < levels; ++n) {
        const double s = std::sqrt(static_cast<double>(n + 1));
        k(n + 1, n) += d * s;        // a^dag
        k(n, n + 1) -= std::conj(d) * s;  // a
    }
    // k is anti-Hermitian: exp(k) = V exp(-i lambda) V^dag with H = i k
    Eigen::SelfAdjointEigenSolver<Mat> es(cdouble(0.0, 1.0) * k);
    Mat u = es.eigenvectors() *
            (cdouble(0.0, -1.0) * es.eigenvalues().array().cast<cdouble>()).exp().matrix().asDiagonal() *
            es.eigenvectors().adjoint();
    const double defect = (u.adjoint() * u - Mat::Identity(levels, levels)).norm();
    if (defect > 1e-8) throw std::runtime_error("displacement_unitary: unitarity defect");
    return u;
}

/// Applies a single-mode matrix to the tensor along one mode axis.
void apply_mode_matrix(DenseState& st, int mode, const Mat& u) {
    const std::size_t levels = st.levels();
    const std::size_t str = st.stride(mode);
    const std::size_t dim = st.dim();
    std::vector<cdouble> slice(levels);
    for (std::size_t base = 0; base < dim; ++base) {
        // visit each fiber once: base must have digit 0 in this mode
        if ((base / str) % levels != 0) continue;
        for (std::size_t n = 0; n < levels; ++n) slice[n] = st.coeff[base + n * str];
        for (std::size_t mrow = 0; mrow < levels; ++mrow) {
            cdouble acc = 0.0;
            for (std::size_t n = 0; n < levels; ++n) acc += u(mrow, n) * slice[n];
            st.coeff[base + mrow * str] = acc;
        }
    }
}

double factorial_ratio_sqrt(int small, int large) {  // sqrt(small!/large!)
    double r = 1.0;
    for (int k = small + 1; k <= large; ++k) r /= std::sqrt(static_cast<double>(k));
    return r;
}

/// Generalized Laguerre L_n^{(a)}(x) by the stable three-term recurrence.
double laguerre(int n, int a, double x) {
    if (n == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2 * k + 1 + a - x) * l - (k + a) * lm1) / (k + 1);
        lm1 = l;
        l = next;
    }
    return l;
}

}  // namespace

std::size_t DenseState::dim() const { return ipow(levels(), mode_count); }

std::size_t DenseState::stride(int mode) const {
    return ipow(levels(), mode_count - 1 - mode);
}

double DenseState::norm2() const {
    double s = 0.0;
    for (const auto& z : coeff) s += std::norm(z);
    return s;
}

DenseState densify(const DisplacedVacuum& state, int fock_cutoff) {
    return densify_component(state.chi, 1.0, std::vector<cdouble>(state.chi.size()), 1.0,
                             fock_cutoff);
}

DenseState densify(const PhotonAddedState& state, int fock_cutoff) {
    if (state.norm_Na <= 0.0) throw std::invalid_argument("densify: zero-norm state");
    return densify_component(state.chi_frame, state.H2, state.h1,
                             1.0 / std::sqrt(state.norm_Na), fock_cutoff);
}

DenseState densify(const ConditionedField& state, int fock_cutoff) {
    return densify_component(state.chi_frame, state.vac, state.one, 1.0, fock_cutoff);
}

void fold_displacement(DenseState& state) {
    for (int q = 0; q < state.mode_count; ++q) {
        const cdouble d = state.displacement[q];
        if (std::abs(d) > state.fock_cutoff / 3.0)
            throw std::invalid_argument("fold_displacement: |chi| too large for the cutoff");
        if (d == cdouble(0.0, 0.0)) continue;
        apply_mode_matrix(state, q, displacement_unitary(d, state.levels()));
    }
    state.displacement.assign(state.mode_count, cdouble(0.0, 0.0));
}

cdouble displacement_element(int m, int n, cdouble z) {
    if (m < 0 || n < 0) throw std::invalid_argument("displacement_element: negative index");
    const double x = std::norm(z);
    const double gauss = std::exp(-0.5 * x);
    if (m >= n)
        return factorial_ratio_sqrt(n, m) * std::pow(z, m - n) * gauss * laguerre(n, m - n, x);
    return factorial_ratio_sqrt(m, n) * std::pow(-std::conj(z), n - m) * gauss *
           laguerre(m, n - m, x);
}

namespace {

void check_mode_index(const DenseState& st, int q) {
    if (q < 1 || q > st.mode_count) throw std::out_of_range("oracle: mode index out of range");
}

/// <psi| D(2 gamma) Pi |psi> on mode q (0-based), exact for finite support.
double displaced_parity_undisplaced(const DenseState& st, int mode, cdouble gamma) {
    const int levels = st.levels();
    Mat op(levels, levels);
    for (int mrow = 0; mrow < levels; ++mrow)
        for (int n = 0; n < levels; ++n)
            op(mrow, n) = displacement_element(mrow, n, 2.0 * gamma) * ((n % 2) ? -1.0 : 1.0);
    const std::size_t str = st.stride(mode);
    const std::size_t dim = st.dim();
    cdouble acc = 0.0;
    for (std::size_t base = 0; base < dim; ++base) {
        if ((base / str) % levels != 0) continue;
        for (int mrow = 0; mrow < levels; ++mrow)
            for (int n = 0; n < levels; ++n)
                acc += std::conj(st.coeff[base + mrow * str]) * op(mrow, n) *
                       st.coeff[base + n * str];
    }
    return acc.real();
}

}  // namespace

double dense_expectation(const DenseState& state, const OperatorSpec& op) {
    check_mode_index(state, op.q);
    const int mode = op.q - 1;
    const cdouble d = state.displacement[mode];
    const std::size_t str = state.stride(mode);
    const std::size_t levels = state.levels();
    switch (op.kind) {
        case OperatorSpec::Kind::Number: {
            // <(a^dag + d*)(a + d)> on the undisplaced tensor
            double n_mean = 0.0;
            cdouble a_mean = 0.0;
            for (std::size_t idx = 0; idx < state.dim(); ++idx) {
                const std::size_t n = (idx / str) % levels;
                n_mean += static_cast<double>(n) * std::norm(state.coeff[idx]);
                if (n + 1 < levels)
                    a_mean += std::conj(state.coeff[idx]) * std::sqrt(n + 1.0) *
                              state.coeff[idx + str];
            }
            return n_mean + 2.0 * std::real(std::conj(d) * a_mean) +
                   std::norm(d) * state.norm2();
        }
        case OperatorSpec::Kind::Parity:
            return displaced_parity_undisplaced(state, mode, -d);
        case OperatorSpec::Kind::DisplacedParity:
            return displaced_parity_undisplaced(state, mode, op.beta - d);
    }
    throw std::logic_error("dense_expectation: bad operator kind");
}

double dense_wigner(const DenseState& state, int q, cdouble beta) {
    constexpr double kPi = 3.14159265358979323846;
    OperatorSpec op;
    op.kind = OperatorSpec::Kind::DisplacedParity;
    op.q = q;
    op.beta = beta / std::sqrt(2.0);
    return dense_expectation(state, op) / kPi;
}

cdouble dense_overlap(const DenseState& a, const DenseState& b) {
    if (a.mode_count != b.mode_count || a.fock_cutoff != b.fock_cutoff)
        throw std::invalid_argument("dense_overlap: mismatched geometry");
    for (int q = 0; q < a.mode_count; ++q)
        if (std::abs(a.displacement[q] - b.displacement[q]) > 1e-12)
            throw std::invalid_argument("dense_overlap: mismatched displacement records");
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.coeff[i]) * b.coeff[i];
    return acc;
}

namespace {

Mat mixture_density(const std::vector<std::pair<double, DenseState>>& mixture) {
    if (mixture.empty()) throw std::invalid_argument("oracle: empty mixture");
    const auto& first = mixture.front().second;
    const auto dim = static_cast<Eigen::Index>(first.dim());
    Mat rho = Mat::Zero(dim, dim);
    for (const auto& [w, st] : mixture) {
        if (st.mode_count != first.mode_count || st.fock_cutoff != first.fock_cutoff)
            throw std::invalid_argument("oracle: mixture geometry mismatch");
        Eigen::Map<const Vec> v(st.coeff.data(), dim);
        rho += w * (v * v.adjoint());
    }
    return rho;
}

std::vector<bool> mode_mask(const DenseState& st, const std::vector<int>& set_a) {
    std::vector<bool> in_a(st.mode_count, false);
    for (int q : set_a) {
        if (q < 1 || q > st.mode_count) throw std::out_of_range("oracle: partition mode index");
        in_a[q - 1] = true;
    }
    return in_a;
}

// Splits a flat index into (index over A modes, index over B modes).
std::pair<std::size_t, std::size_t> split_index(const DenseState& st, std::size_t idx,
                                                const std::vector<bool>& in_a) {
    std::size_t ia = 0, ib = 0;
    const std::size_t levels = st.levels();
    for (int q = 0; q < st.mode_count; ++q) {
        const std::size_t digit = (idx / st.stride(q)) % levels;
        if (in_a[q])
            ia = ia * levels + digit;
        else
            ib = ib * levels + digit;
    }
    return {ia, ib};
}

}  // namespace

std::vector<cdouble> dense_reduced_density(
    const std::vector<std::pair<double, DenseState>>& mixture, const std::vector<int>& set_a) {
    const auto& st = mixture.front().second;
    const auto in_a = mode_mask(st, set_a);
    const std::size_t dim_a = ipow(st.levels(), static_cast<int>(set_a.size()));
    const Mat rho = mixture_density(mixture);
    Mat red = Mat::Zero(dim_a, dim_a);
    for (std::size_t i = 0; i < st.dim(); ++i) {
        const auto [ia, ib] = split_index(st, i, in_a);
        for (std::size_t j = 0; j < st.dim(); ++j) {
            const auto [ja, jb] = split_index(st, j, in_a);
            if (ib != jb) continue;
            red(ia, ja) += rho(i, j);
        }
    }
    std::vector<cdouble> out(dim_a * dim_a);
    for (std::size_t r = 0; r < dim_a; ++r)
        for (std::size_t c = 0; c < dim_a; ++c) out[r * dim_a + c] = red(r, c);
    return out;
}

namespace {

Mat partial_transpose_matrix(const std::vector<std::pair<double, DenseState>>& mixture,
                             const std::vector<int>& set_a) {
    const auto& st = mixture.front().second;
    if (st.mode_count > 4 || st.fock_cutoff > 4)
        throw std::invalid_argument("dense negativity: dimension guard exceeded");
    const auto in_a = mode_mask(st, set_a);
    const Mat rho = mixture_density(mixture);
    const std::size_t dim = st.dim();
    Mat pt = Mat::Zero(dim, dim);
    // transpose the A-subsystem indices: (ia ib, ja jb) -> (ja ib, ia jb)
    std::vector<std::size_t> a_part(dim), b_part(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto [ia, ib] = split_index(st, i, in_a);
        a_part[i] = ia;
        b_part[i] = ib;
    }
    // recompose: map (ia, ib) -> flat index
    const std::size_t levels = st.levels();
    // map (ia, ib) back to a flat tensor index by reconstructing the digits
    auto flat_of = [&](std::size_t ia, std::size_t ib) {
        std::size_t idx = 0;
        // digits are consumed most-significant-first in split_index; rebuild in reverse
        std::vector<std::size_t> da, db;
        for (int q = st.mode_count - 1; q >= 0; --q) {
            if (in_a[q]) {
                da.push_back(ia % levels);
                ia /= levels;
            } else {
                db.push_back(ib % levels);
                ib /= levels;
            }
        }
        std::size_t ka = da.size(), kb = db.size();
        for (int q = 0; q < st.mode_count; ++q) {
            const std::size_t digit = in_a[q] ? da[--ka] : db[--kb];
            idx += digit * st.stride(q);
        }
        return idx;
    };
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            pt(flat_of(a_part[j], b_part[i]), flat_of(a_part[i], b_part[j])) = rho(i, j);
    return pt;
}

}  // namespace

double dense_partial_transpose_negativity(
    const std::vector<std::pair<double, DenseState>>& mixture, const std::vector<int>& set_a) {
    const Mat pt = partial_transpose_matrix(mixture, set_a);
    Eigen::SelfAdjointEigenSolver<Mat> es(pt);
    double neg = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()[k] < 0.0) neg -= es.eigenvalues()[k];
    return neg;
}

double dense_pt_witness_value(const std::vector<std::pair<double, DenseState>>& mixture,
                              const std::vector<int>& set_a, const DenseState& witness) {
    const Mat pt_w = partial_transpose_matrix({{1.0, witness}}, set_a);
    const Mat pt_m = partial_transpose_matrix(mixture, set_a);
    Eigen::SelfAdjointEigenSolver<Mat> es(pt_w);
    Eigen::Index kmin = 0;
    es.eigenvalues().minCoeff(&kmin);
    const auto v = es.eigenvectors().col(kmin);
    return (v.adjoint() * pt_m * v)(0, 0).real();
}

double dense_entropy(const std::vector<cdouble>& rho_row_major) {
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(
        static_cast<double>(rho_row_major.size()))));
    if (static_cast<std::size_t>(dim) * dim != rho_row_major.size())
        throw std::invalid_argument("dense_entropy: matrix not square");
    Mat rho(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) rho(r, c) = rho_row_major[r * dim + c];
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double lam = es.eigenvalues()[k];
        if (lam > 1e-15) s -= lam * std::log2(lam);
    }
    return s;
}

}  // namespace hhgqo
