#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hhgqo/dipole.hpp"

using namespace hhgqo;

namespace {

// desk-sized grid for unit tests; production defaults live in the pipeline
const SpatialGrid kGrid{-150.0, 150.0, 2048, 30.0};

Molecule test_molecule(double r = 2.0) {
    Molecule mol;
    mol.interatomic_distance_au = r;
    mol.softcore_param_au = 1.0;
    return mol;
}

Pulse short_pulse(double intensity = 1.0e14, int cycles = 2) {
    Pulse p;
    p.peak_intensity_W_cm2 = intensity;
    p.n_cycles = cycles;
    return p;
}

}  // namespace

TEST_CASE("single-center ground orbital relaxes to the soft-core energy") {
    const auto res = ground_orbital(0.0, test_molecule(), kGrid);
    // 1D soft-core hydrogen with a = 1: ground energy near -0.6698 a.u.
    CHECK(res.energy == doctest::Approx(-0.6698).epsilon(2e-3));
    CHECK(res.psi.norm2(kGrid) == doctest::Approx(1.0).epsilon(1e-10));
    // real and even about its center
    double asym = 0.0;
    for (int i = 0; i < kGrid.n_points; ++i)
        asym = std::max(asym, std::abs(res.psi.amp[i] - res.psi.amp[kGrid.mirror(i)]));
    CHECK(asym < 1e-6);
}

TEST_CASE("LCAO pair: parity, orthogonality, energy ordering") {
    const auto lcao = build_lcao_states(test_molecule(), kGrid);
    CHECK(std::abs(inner(lcao.bonding, lcao.antibonding, kGrid)) < 1e-13);
    CHECK(lcao.bonding.norm2(kGrid) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lcao.antibonding.norm2(kGrid) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lcao.energy_bonding < lcao.energy_antibonding);
    CHECK(lcao.overlap > 0.0);
    double even_defect = 0.0, odd_defect = 0.0;
    for (int i = 0; i < kGrid.n_points; ++i) {
        even_defect = std::max(even_defect,
                               std::abs(lcao.bonding.amp[i] - lcao.bonding.amp[kGrid.mirror(i)]));
        odd_defect = std::max(
            odd_defect, std::abs(lcao.antibonding.amp[i] + lcao.antibonding.amp[kGrid.mirror(i)]));
    }
    CHECK(even_defect < 1e-12);
    CHECK(odd_defect < 1e-12);
}

TEST_CASE("localized states are orthonormal and side-concentrated") {
    const auto lcao = build_lcao_states(test_molecule(), kGrid);
    const auto [right, left] = localized_states(lcao.bonding, lcao.antibonding);
    CHECK(std::abs(inner(right, left, kGrid)) < 1e-12);
    CHECK(right.norm2(kGrid) == doctest::Approx(1.0).epsilon(1e-12));
    double right_mass = 0.0, left_mass = 0.0;
    for (int i = 0; i < kGrid.n_points; ++i) {
        const double w = std::norm(right.amp[i]) * kGrid.dx();
        (kGrid.x(i) > 0.0 ? right_mass : left_mass) += w;
    }
    // at R = 2 the atomic orbitals overlap substantially, so the localized
    // combinations keep ~10% of their weight on the far side
    CHECK(right_mass > 0.85);
    CHECK(left_mass < 0.15);
}

TEST_CASE("parity selection: diagonal dipoles vanish without a field") {
    PropagationOptions opt;
    opt.dt = 0.05;
    // effectively zero field
    const auto tr = propagate_semiclassical(test_molecule(), short_pulse(1e-10, 1), kGrid, opt);
    double max_bb = 0.0, max_aa = 0.0, max_ab = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        max_bb = std::max(max_bb, std::abs(tr.mu_bb[i]));
        max_aa = std::max(max_aa, std::abs(tr.mu_aa[i]));
        max_ab = std::max(max_ab, std::abs(tr.mu_ab[i]));
    }
    CHECK(max_bb < 1e-8);
    CHECK(max_aa < 1e-8);
    // the cross element is parity-allowed: it rotates at the gap frequency with
    // constant magnitude equal to the static bonding-antibonding dipole (~R/2)
    double min_ab = max_ab;
    for (std::size_t i = 0; i < tr.size(); ++i) min_ab = std::min(min_ab, std::abs(tr.mu_ab[i]));
    CHECK(max_ab > 0.5);
    CHECK(max_ab - min_ab < 1e-3 * max_ab);  // small drift from the absorbing boundary
}

TEST_CASE("field inversion maps the dipole components consistently") {
    PropagationOptions opt;
    opt.dt = 0.05;
    Pulse plus = short_pulse();
    Pulse minus = plus;
    minus.carrier_phase = 3.14159265358979323846;  // E -> -E
    const auto tp = propagate_semiclassical(test_molecule(), plus, kGrid, opt);
    const auto tm = propagate_semiclassical(test_molecule(), minus, kGrid, opt);
    REQUIRE(tp.size() == tm.size());
    double max_bb = 0.0, d_bb = 0.0, max_ab = 0.0, d_ab = 0.0;
    for (std::size_t i = 0; i < tp.size(); ++i) {
        max_bb = std::max(max_bb, std::abs(tp.mu_bb[i]));
        d_bb = std::max(d_bb, std::abs(tp.mu_bb[i] + tm.mu_bb[i]));  // flips sign
        max_ab = std::max(max_ab, std::abs(tp.mu_ab[i]));
        d_ab = std::max(d_ab, std::abs(tp.mu_ab[i] - tm.mu_ab[i]));  // invariant
    }
    CHECK(d_bb < 1e-8 * std::max(1.0, max_bb));
    CHECK(d_ab < 1e-8 * std::max(1.0, max_ab));
}

TEST_CASE("trace metadata and validity") {
    PropagationOptions opt;
    opt.dt = 0.05;
    const auto tr = propagate_semiclassical(test_molecule(2.2), short_pulse(), kGrid, opt);
    CHECK(tr.R == 2.2);
    CHECK(tr.size() >= 2);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == doctest::Approx(short_pulse().t_end()));
    CHECK_NOTHROW(tr.validate());
    // diagnostic ratio of cross to diagonal dipole strength; order unity here
    CHECK(tr.truncation_ratio() > 0.0);
    CHECK(tr.truncation_ratio() < 10.0);
    // uniform step
    const double dt = tr.times[1] - tr.times[0];
    for (std::size_t i = 1; i + 1 < tr.size(); ++i)
        CHECK(std::abs(tr.times[i + 1] - tr.times[i] - dt) < 1e-9);
}

TEST_CASE("dt precondition from the mode comb is enforced") {
    PropagationOptions opt;
    opt.dt = 0.5;
    opt.q_cutoff_hint = 100;  // requires dt <= 0.02*2pi/(100*w_L) ~ 0.022
    CHECK_THROWS_AS(propagate_semiclassical(test_molecule(), short_pulse(), kGrid, opt),
                    std::invalid_argument);
}

TEST_CASE("binary trace cache round-trips bit-exactly") {
    PropagationOptions opt;
    opt.dt = 0.05;
    const auto tr = propagate_semiclassical(test_molecule(), short_pulse(), kGrid, opt);
    const auto path = std::filesystem::temp_directory_path() / "hhgqo_trace_test.bin";
    save_trace(tr, path.string());
    const auto back = load_trace(path.string());
    REQUIRE(back.size() == tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(back.times[i] == tr.times[i]);
        CHECK(back.mu_bb[i] == tr.mu_bb[i]);
        CHECK(back.mu_aa[i] == tr.mu_aa[i]);
        CHECK(back.mu_ab[i] == tr.mu_ab[i]);
        CHECK(back.e_cl[i] == tr.e_cl[i]);
    }
    CHECK(back.R == tr.R);
    CHECK(back.dt == tr.dt);
    std::filesystem::remove(path);
}

TEST_CASE("cache keys separate parameter points") {
    const auto k1 = trace_cache_key(test_molecule(2.0), short_pulse(), kGrid, 0.05);
    const auto k2 = trace_cache_key(test_molecule(2.5), short_pulse(), kGrid, 0.05);
    const auto k3 = trace_cache_key(test_molecule(2.0), short_pulse(), kGrid, 0.02);
    CHECK(k1 != k2);
    CHECK(k1 != k3);
    CHECK(k1 == trace_cache_key(test_molecule(2.0), short_pulse(), kGrid, 0.05));
}
