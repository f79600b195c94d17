#include <doctest.h>

#include <cmath>

#include "hhgqo/field.hpp"

using namespace hhgqo;

TEST_CASE("800 nm carrier frequency in atomic units") {
    Pulse p;
    CHECK(p.omega_L() == doctest::Approx(0.056954).epsilon(1e-4));
}

TEST_CASE("peak field from intensity") {
    Pulse p;  // 5e14 W/cm^2
    CHECK(p.peak_field() == doctest::Approx(0.11937).epsilon(1e-4));
}

TEST_CASE("8-cycle duration is about 21.4 fs") {
    Pulse p;
    CHECK(p.t_end() * units::au_time_fs == doctest::Approx(21.36).epsilon(2e-3));
}

TEST_CASE("sin^2 envelope vanishes at the edges and peaks mid-pulse") {
    Pulse p;
    CHECK(p.envelope_value(0.0) == 0.0);
    CHECK(p.envelope_value(p.t_end()) == 0.0);
    CHECK(p.envelope_value(0.5 * p.t_end()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.envelope_value(0.25 * p.t_end()) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("classical field rejects times outside the pulse") {
    Pulse p;
    CHECK_THROWS_AS(classical_field(p, -1.0), std::out_of_range);
    CHECK_THROWS_AS(classical_field(p, p.t_end() + 1.0), std::out_of_range);
    CHECK(std::abs(classical_field(p, 0.5 * p.t_end())) <= p.peak_field());
}

TEST_CASE("carrier phase pi flips the field sign") {
    Pulse p, q;
    q.carrier_phase = units::pi;
    for (double f : {0.13, 0.37, 0.52, 0.78})
        CHECK(classical_field(q, f * p.t_end()) ==
              doctest::Approx(-classical_field(p, f * p.t_end())).epsilon(1e-12));
}

TEST_CASE("mode comb and sqrt(q) coupling") {
    ModeSet m;
    m.omega_L_au = 0.057;
    m.q_cutoff = 5;
    m.coupling_g0 = 2.0;
    const auto freqs = mode_frequencies(m);
    REQUIRE(freqs.size() == 5);
    CHECK(freqs[0] == doctest::Approx(0.057));
    CHECK(freqs[4] == doctest::Approx(5 * 0.057));
    CHECK(m.coupling(4) == doctest::Approx(4.0));  // g0 * sqrt(4)
}

TEST_CASE("validation rejects nonsense") {
    Pulse p;
    p.n_cycles = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    Molecule mol;
    mol.interatomic_distance_au = -1.0;
    CHECK_THROWS_AS(mol.validate(), std::invalid_argument);
    ModeSet m;
    m.q_cutoff = 0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("molecule centers straddle the origin") {
    Molecule mol;
    mol.interatomic_distance_au = 2.6;
    CHECK(mol.center_right() == doctest::Approx(1.3));
    CHECK(mol.center_left() == doctest::Approx(-1.3));
}
