#include <doctest.h>

#include <cmath>

#include "hhgqo/qo_state.hpp"

using namespace hhgqo;

namespace {

DisplacementSet toy_chi(std::vector<cdouble> chi, double n_mol = 1.0) {
    DisplacementSet d;
    d.chi = std::move(chi);
    d.phase_phi = 0.125;
    d.source = DipoleChannel::Bonding;
    d.n_mol = n_mol;
    return d;
}

TransitionAmplitudes toy_amps(std::vector<cdouble> h1, std::vector<cdouble> h2) {
    TransitionAmplitudes a;
    a.h1 = std::move(h1);
    a.h2 = std::move(h2);
    for (const auto& z : a.h2) a.H2 += z;
    return a;
}

}  // namespace

TEST_CASE("make_photon_added recomputes the excitation norm") {
    const auto st = make_photon_added({cdouble(0.1, 0), cdouble(0, 0)},
                                      {cdouble(0.3, 0.4), cdouble(0, 0.2)}, cdouble(0.6, 0));
    CHECK(st.norm_Na == doctest::Approx(0.25 + 0.04 + 0.36).epsilon(1e-14));
    CHECK_THROWS_AS(make_photon_added({cdouble(0, 0)}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("assemble_joint with zero amplitudes is a product state") {
    const auto joint = assemble_joint(toy_chi({cdouble(0.2, 0.1), cdouble(0, 0)}),
                                      toy_amps({0.0, 0.0}, {0.0, 0.0}));
    CHECK(joint.total_norm_N == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(joint.comp_second.norm2() == 0.0);
    CHECK(joint.comp_first.vac == cdouble(1.0, 0.0));
    CHECK(joint.global_phase == doctest::Approx(0.125));
}

TEST_CASE("antibonding population identity N_a/(1+N_a)") {
    const auto joint = assemble_joint(
        toy_chi({cdouble(0.2, 0), cdouble(0, 0.1)}),
        toy_amps({cdouble(0.3, 0), cdouble(0, 0.2)}, {cdouble(0.1, 0), cdouble(0, 0)}));
    const double na = joint.comp_second.norm2();
    const auto cond = condition(joint, ElectronState::Antibonding);
    CHECK(cond.probability == doctest::Approx(na / (1.0 + na)).epsilon(1e-14));
}

TEST_CASE("mode count mismatch is rejected") {
    CHECK_THROWS_AS(assemble_joint(toy_chi({cdouble(0.1, 0)}), toy_amps({0.0, 0.0}, {0.0, 0.0})),
                    std::invalid_argument);
}

TEST_CASE("localized basis round trip is an involution") {
    const auto joint = assemble_joint(
        toy_chi({cdouble(0.2, 0), cdouble(0, 0.1)}),
        toy_amps({cdouble(0.3, -0.1), cdouble(0.05, 0.2)}, {cdouble(0.07, 0.02), cdouble(0, 0.01)}));
    const auto back = to_localized(to_localized(joint));
    CHECK(back.basis == ElectronBasis::Energy);
    CHECK(std::abs(back.comp_first.vac - joint.comp_first.vac) < 1e-14);
    CHECK(std::abs(back.comp_second.vac - joint.comp_second.vac) < 1e-14);
    for (int q = 0; q < 2; ++q) {
        CHECK(std::abs(back.comp_first.one[q] - joint.comp_first.one[q]) < 1e-14);
        CHECK(std::abs(back.comp_second.one[q] - joint.comp_second.one[q]) < 1e-14);
    }
    // norm preserved
    const auto loc = to_localized(joint);
    CHECK(loc.comp_first.norm2() + loc.comp_second.norm2() ==
          doctest::Approx(joint.comp_first.norm2() + joint.comp_second.norm2()).epsilon(1e-14));
}

TEST_CASE("with no antibonding amplitude the localized components coincide") {
    const auto joint =
        assemble_joint(toy_chi({cdouble(0.4, 0)}), toy_amps({0.0}, {0.0}));
    const auto loc = to_localized(joint);
    CHECK(std::abs(loc.comp_first.vac - loc.comp_second.vac) < 1e-15);
    CHECK(std::abs(loc.comp_first.vac - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("conditioning on bonding returns the displaced vacuum unchanged") {
    const auto joint = assemble_joint(
        toy_chi({cdouble(0.2, 0)}), toy_amps({cdouble(0.3, 0)}, {cdouble(0.1, 0)}));
    const auto cond = condition(joint, ElectronState::Bonding);
    CHECK(std::abs(cond.vac - 1.0) < 1e-15);
    CHECK(std::abs(cond.one[0]) == 0.0);
    CHECK(cond.chi_frame == joint.chi_frame);
}

TEST_CASE("conditioning on an empty antibonding branch fails") {
    const auto joint = assemble_joint(toy_chi({cdouble(0.2, 0)}), toy_amps({0.0}, {0.0}));
    CHECK_THROWS_AS(condition(joint, ElectronState::Antibonding), std::runtime_error);
}

TEST_CASE("localized conditioning implements H2 -> 1 + H2") {
    const cdouble h1(0.2, 0.1), h2(0.05, -0.02);
    const auto joint = assemble_joint(toy_chi({cdouble(0.3, 0)}), toy_amps({h1}, {h2}));
    const auto right = condition(joint, ElectronState::LocalRight);
    // R-bar component ~ (1 + H2)|0> + h1|1>
    const cdouble expect_vac = 1.0 + h2;
    const double norm = std::sqrt(std::norm(expect_vac) + std::norm(h1));
    CHECK(std::abs(right.vac - expect_vac / norm) < 1e-14);
    CHECK(std::abs(right.one[0] - h1 / norm) < 1e-14);
}

TEST_CASE("conditioning probabilities are complete in both bases") {
    const auto joint = assemble_joint(
        toy_chi({cdouble(0.2, 0), cdouble(0, 0.3)}),
        toy_amps({cdouble(0.3, -0.2), cdouble(0.1, 0)}, {cdouble(0.15, 0.05), 0.0}));
    const double pb = condition(joint, ElectronState::Bonding).probability;
    const double pa = condition(joint, ElectronState::Antibonding).probability;
    CHECK(pb + pa == doctest::Approx(1.0).epsilon(1e-14));
    const double pr = condition(joint, ElectronState::LocalRight).probability;
    const double pl = condition(joint, ElectronState::LocalLeft).probability;
    CHECK(pr + pl == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("overlap identity sqrt(N_a) <Phi_b|Phi_a-bar> = H2") {
    const auto amps = toy_amps({cdouble(0.3, -0.2), cdouble(0.1, 0)},
                               {cdouble(0.15, 0.05), cdouble(-0.02, 0.08)});
    const auto joint = assemble_joint(toy_chi({cdouble(0.2, 0), cdouble(0, 0.3)}), amps);
    // inner product in the displaced frame: vacuum component of comp_second
    const double na = joint.comp_second.norm2();
    cdouble overlap = std::conj(joint.comp_first.vac) * joint.comp_second.vac;
    for (int q = 0; q < 2; ++q)
        overlap += std::conj(joint.comp_first.one[q]) * joint.comp_second.one[q];
    const cdouble normalized = overlap / std::sqrt(na);  // <Phi_b|Phi_a-bar>
    CHECK(std::abs(std::sqrt(na) * normalized - amps.H2) < 1e-14);
}

TEST_CASE("JSON round trip preserves the state") {
    const auto joint = assemble_joint(
        toy_chi({cdouble(0.2, -0.7), cdouble(0.01, 0.3)}),
        toy_amps({cdouble(0.3, -0.2), cdouble(0.1, 0)}, {cdouble(0.15, 0.05), 0.0}));
    const auto back = joint_from_json(joint_to_json(joint));
    CHECK(back.basis == joint.basis);
    CHECK(back.global_phase == joint.global_phase);
    CHECK(back.total_norm_N == joint.total_norm_N);
    for (int q = 0; q < 2; ++q) {
        CHECK(back.chi_frame[q] == joint.chi_frame[q]);
        CHECK(back.comp_second.one[q] == joint.comp_second.one[q]);
    }
    CHECK(back.comp_second.vac == joint.comp_second.vac);
}
