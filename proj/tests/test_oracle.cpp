#include <doctest.h>

#include <cmath>
#include <random>

#include "hhgqo/oracle.hpp"

using namespace hhgqo;

TEST_CASE("densify places vacuum and single-photon amplitudes") {
    DisplacedVacuum vac;
    vac.chi = {cdouble(0, 0), cdouble(0, 0)};
    const auto d0 = densify(vac, 3);
    CHECK(std::abs(d0.coeff[0] - 1.0) < 1e-15);
    CHECK(d0.norm2() == doctest::Approx(1.0));

    const auto st = make_photon_added({cdouble(0, 0), cdouble(0, 0)}, {0.0, cdouble(1, 0)}, 0.0);
    const auto d1 = densify(st, 3);
    CHECK(std::abs(d1.coeff[d1.stride(1)] - 1.0) < 1e-15);  // |0 1>
}

TEST_CASE("folded displacement reproduces the coherent-state law") {
    DisplacedVacuum st;
    st.chi = {cdouble(0.5, 0.0)};
    DenseState dense = densify(st, 8);
    fold_displacement(dense);
    CHECK(dense.norm2() == doctest::Approx(1.0).epsilon(1e-10));
    // Poissonian amplitudes |c_n|^2 = e^{-lam} lam^n / n!, lam = 0.25
    const double lam = 0.25;
    double fact = 1.0;
    for (int n = 0; n <= 4; ++n) {
        if (n > 0) fact *= n;
        CHECK(std::norm(dense.coeff[n]) ==
              doctest::Approx(std::exp(-lam) * std::pow(lam, n) / fact).epsilon(1e-6));
    }
    OperatorSpec num{OperatorSpec::Kind::Number, 1, {}};
    CHECK(dense_expectation(dense, num) == doctest::Approx(lam).epsilon(1e-6));
}

TEST_CASE("fold guards oversized displacements") {
    DisplacedVacuum st;
    st.chi = {cdouble(3.0, 0.0)};
    DenseState dense = densify(st, 4);
    CHECK_THROWS_AS(fold_displacement(dense), std::invalid_argument);
}

TEST_CASE("analytic displacement record is exact for expectation values") {
    DisplacedVacuum st;
    st.chi = {cdouble(1.0, 0.0)};
    const auto dense = densify(st, 6);
    OperatorSpec num{OperatorSpec::Kind::Number, 1, {}};
    CHECK(dense_expectation(dense, num) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parity basics") {
    const auto one = make_photon_added({cdouble(0, 0)}, {cdouble(1, 0)}, 0.0);
    OperatorSpec par{OperatorSpec::Kind::Parity, 1, {}};
    CHECK(dense_expectation(densify(one, 4), par) == doctest::Approx(-1.0).epsilon(1e-12));
    DisplacedVacuum vac;
    vac.chi = {cdouble(0, 0)};
    OperatorSpec num{OperatorSpec::Kind::Number, 1, {}};
    CHECK(dense_expectation(densify(vac, 4), num) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("displacement matrix elements satisfy known identities") {
    const cdouble z(0.4, -0.3);
    CHECK(std::abs(displacement_element(0, 0, z) - std::exp(-0.5 * std::norm(z))) < 1e-14);
    // <1|D|0> = z e^{-|z|^2/2}
    CHECK(std::abs(displacement_element(1, 0, z) - z * std::exp(-0.5 * std::norm(z))) < 1e-14);
    // <0|D|1> = -conj(z) e^{-|z|^2/2}
    CHECK(std::abs(displacement_element(0, 1, z) + std::conj(z) * std::exp(-0.5 * std::norm(z))) <
          1e-14);
    // and against the truncated unitary at small amplitude, where truncation
    // error is negligible
    DisplacedVacuum st;
    st.chi = {cdouble(0.2, 0.1)};
    DenseState folded = densify(st, 8);
    fold_displacement(folded);
    for (int m = 0; m <= 3; ++m)
        CHECK(std::abs(folded.coeff[m] - displacement_element(m, 0, cdouble(0.2, 0.1))) < 1e-8);
}

TEST_CASE("coherent Wigner from the dense oracle is Gaussian with max 1/pi") {
    DisplacedVacuum st;
    st.chi = {cdouble(0.4, -0.6)};
    const auto dense = densify(st, 6);
    const cdouble center = std::sqrt(2.0) * st.chi[0];
    constexpr double kPi = 3.14159265358979323846;
    CHECK(dense_wigner(dense, 1, center) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
    const cdouble off = center + cdouble(1.0, 0.5);
    CHECK(dense_wigner(dense, 1, off) ==
          doctest::Approx(std::exp(-std::norm(off - center)) / kPi).epsilon(1e-10));
}

TEST_CASE("reduced densities are proper and pure-state entropies symmetric") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int rep = 0; rep < 20; ++rep) {
        ConditionedField st;
        st.chi_frame = {cdouble(0, 0), cdouble(0, 0)};
        st.vac = cdouble(u(rng), u(rng));
        st.one = {cdouble(u(rng), u(rng)), cdouble(u(rng), u(rng))};
        const double norm =
            std::sqrt(std::norm(st.vac) + std::norm(st.one[0]) + std::norm(st.one[1]));
        st.vac /= norm;
        for (auto& z : st.one) z /= norm;
        const auto dense = densify(st, 3);
        const auto rho_a = dense_reduced_density({{1.0, dense}}, {1});
        const auto rho_b = dense_reduced_density({{1.0, dense}}, {2});
        double tr = 0.0;
        const auto dim = static_cast<std::size_t>(std::sqrt(static_cast<double>(rho_a.size())));
        for (std::size_t i = 0; i < dim; ++i) tr += rho_a[i * dim + i].real();
        CHECK(tr == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dense_entropy(rho_a) == doctest::Approx(dense_entropy(rho_b)).epsilon(1e-9));
    }
}

TEST_CASE("negativity: Bell pair, product state, classical mixture") {
    DenseState bell;
    bell.mode_count = 2;
    bell.fock_cutoff = 2;
    bell.displacement.assign(2, cdouble(0, 0));
    bell.coeff.assign(bell.dim(), cdouble(0, 0));
    const double inv = 1.0 / std::sqrt(2.0);
    bell.coeff[0] = inv;
    bell.coeff[bell.stride(0) + bell.stride(1)] = inv;
    CHECK(dense_partial_transpose_negativity({{1.0, bell}}, {1}) ==
          doctest::Approx(0.5).epsilon(1e-12));

    DenseState prod = bell;
    prod.coeff.assign(prod.dim(), cdouble(0, 0));
    prod.coeff[prod.stride(0)] = 1.0;  // |1 0>
    CHECK(dense_partial_transpose_negativity({{1.0, prod}}, {1}) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // separable classical mixture of |0 0> and |1 1| stays PPT
    DenseState f00 = prod, f11 = prod;
    f00.coeff.assign(f00.dim(), cdouble(0, 0));
    f00.coeff[0] = 1.0;
    f11.coeff.assign(f11.dim(), cdouble(0, 0));
    f11.coeff[f11.stride(0) + f11.stride(1)] = 1.0;
    CHECK(dense_partial_transpose_negativity({{0.5, f00}, {0.5, f11}}, {1}) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rank-2 pure-state negativity equals the Schmidt product") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int rep = 0; rep < 20; ++rep) {
        ConditionedField st;
        st.chi_frame = {cdouble(0, 0), cdouble(0, 0)};
        st.vac = cdouble(u(rng), u(rng));
        st.one = {cdouble(u(rng), u(rng)), cdouble(u(rng), u(rng))};
        const double norm =
            std::sqrt(std::norm(st.vac) + std::norm(st.one[0]) + std::norm(st.one[1]));
        st.vac /= norm;
        for (auto& z : st.one) z /= norm;
        // Schmidt product for mode 1 vs rest
        const double h2 = std::norm(st.one[0]);
        const double rest = std::norm(st.one[1]);  // N_Bbar
        const double expected = std::sqrt(h2 * rest);
        CHECK(dense_partial_transpose_negativity({{1.0, densify(st, 4)}}, {1}) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("dense geometry guards") {
    DisplacedVacuum st;
    st.chi = std::vector<cdouble>(5, cdouble(0, 0));
    CHECK_THROWS_AS(densify(st, 4), std::invalid_argument);
    st.chi = {cdouble(0, 0)};
    CHECK_THROWS_AS(densify(st, 9), std::invalid_argument);
}
