#include "hhgqo/qo_state.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace hhgqo {

namespace {
const char* selector_name(ElectronState s) {
    switch (s) {
        case ElectronState::Bonding: return "bonding";
        case ElectronState::Antibonding: return "antibonding";
        case ElectronState::LocalRight: return "R-bar";
        case ElectronState::LocalLeft: return "L-bar";
    }
    return "?";
}
}  // namespace

PhotonAddedState make_photon_added(std::vector<cdouble> chi_frame, std::vector<cdouble> h1,
                                   cdouble H2) {
    if (chi_frame.size() != h1.size())
        throw std::invalid_argument("make_photon_added: mode count mismatch");
    PhotonAddedState st;
    st.chi_frame = std::move(chi_frame);
    st.h1 = std::move(h1);
    st.H2 = H2;
    st.norm_Na = std::norm(H2);
    for (const auto& z : st.h1) st.norm_Na += std::norm(z);
    return st;
}

JointState assemble_joint(const DisplacementSet& chi_b, const TransitionAmplitudes& amps) {
    if (chi_b.chi.size() != amps.h1.size())
        throw std::invalid_argument("assemble_joint: mismatched mode counts");
    if (chi_b.source != DipoleChannel::Bonding)
        throw std::invalid_argument("assemble_joint: frame must be the bonding displacement");

    JointState joint;
    joint.basis = ElectronBasis::Energy;
    joint.chi_frame = chi_b.chi;  // already carries the n_mol factor
    joint.global_phase = chi_b.phase_phi;

    joint.comp_first.vac = 1.0;
    joint.comp_first.one.assign(chi_b.chi.size(), cdouble(0.0, 0.0));
    joint.comp_second.vac = amps.H2;
    joint.comp_second.one = amps.h1;
    joint.total_norm_N = 1.0 + joint.comp_second.norm2();
    return joint;
}

JointState to_localized(const JointState& joint) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    JointState out = joint;
    out.basis = (joint.basis == ElectronBasis::Energy) ? ElectronBasis::Localized
                                                       : ElectronBasis::Energy;
    const auto& f = joint.comp_first;
    const auto& s = joint.comp_second;
    out.comp_first.vac = inv_sqrt2 * (f.vac + s.vac);
    out.comp_second.vac = inv_sqrt2 * (f.vac - s.vac);
    for (std::size_t q = 0; q < f.one.size(); ++q) {
        out.comp_first.one[q] = inv_sqrt2 * (f.one[q] + s.one[q]);
        out.comp_second.one[q] = inv_sqrt2 * (f.one[q] - s.one[q]);
    }
    return out;
}

ConditionedField condition(const JointState& joint, ElectronState which) {
    const bool want_localized =
        (which == ElectronState::LocalRight || which == ElectronState::LocalLeft);
    const bool have_localized = (joint.basis == ElectronBasis::Localized);
    JointState rotated;
    const JointState* src = &joint;
    if (want_localized != have_localized) {
        rotated = to_localized(joint);
        src = &rotated;
    }

    const bool first =
        (which == ElectronState::Bonding || which == ElectronState::LocalRight);
    const FieldComponent& comp = first ? src->comp_first : src->comp_second;
    const double n2 = comp.norm2();
    // relative guard: the antibonding branch legitimately carries a tiny weight
    // (first order in g0), conditioning on it is still well defined as long as
    // the component is not numerically zero
    if (n2 <= 1e-300 || n2 <= 1e-28 * src->total_norm_N)
        throw std::runtime_error(std::string("condition: conditioned state has zero probability (") +
                                 selector_name(which) + ")");

    ConditionedField out;
    out.selector = which;
    out.chi_frame = src->chi_frame;
    out.probability = n2 / src->total_norm_N;
    const double inv = 1.0 / std::sqrt(n2);
    out.vac = inv * comp.vac;
    out.one.resize(comp.one.size());
    for (std::size_t q = 0; q < comp.one.size(); ++q) out.one[q] = inv * comp.one[q];
    return out;
}

namespace {

nlohmann::json carray(const std::vector<cdouble>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& z : v) a.push_back({z.real(), z.imag()});
    return a;
}

std::vector<cdouble> parse_carray(const nlohmann::json& a) {
    std::vector<cdouble> out;
    out.reserve(a.size());
    for (const auto& e : a) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}

nlohmann::json comp_json(const FieldComponent& c) {
    return {{"vac", {c.vac.real(), c.vac.imag()}}, {"one", carray(c.one)}};
}

FieldComponent parse_comp(const nlohmann::json& j) {
    FieldComponent c;
    c.vac = cdouble(j.at("vac").at(0).get<double>(), j.at("vac").at(1).get<double>());
    c.one = parse_carray(j.at("one"));
    return c;
}

}  // namespace

std::string joint_to_json(const JointState& joint) {
    nlohmann::json j = {
        {"basis", joint.basis == ElectronBasis::Energy ? "energy" : "localized"},
        {"chi_frame", carray(joint.chi_frame)},
        {"global_phase", joint.global_phase},
        {"comp_first", comp_json(joint.comp_first)},
        {"comp_second", comp_json(joint.comp_second)},
        {"total_norm_N", joint.total_norm_N},
    };
    return j.dump(2);
}

JointState joint_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    JointState joint;
    joint.basis = (j.at("basis").get<std::string>() == "energy") ? ElectronBasis::Energy
                                                                 : ElectronBasis::Localized;
    joint.chi_frame = parse_carray(j.at("chi_frame"));
    joint.global_phase = j.at("global_phase").get<double>();
    joint.comp_first = parse_comp(j.at("comp_first"));
    joint.comp_second = parse_comp(j.at("comp_second"));
    joint.total_norm_N = j.at("total_norm_N").get<double>();
    if (joint.comp_first.one.size() != joint.chi_frame.size() ||
        joint.comp_second.one.size() != joint.chi_frame.size())
        throw std::invalid_argument("joint_from_json: inconsistent mode counts");
    return joint;
}

}  // namespace hhgqo
