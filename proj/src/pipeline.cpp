#include "hhgqo/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hhgqo/entanglement.hpp"
#include "hhgqo/observables.hpp"

namespace hhgqo {

namespace {

using nlohmann::json;

const char* kCodeVersion = "hhgqo 1.0.0";

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::string tag(double x) {  // compact deterministic number tag for filenames
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    std::string s = buf;
    for (auto& c : s)
        if (c == '+' || c == '.') c = '_';
    return s;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig c;
    try {
        if (j.contains("pulse")) {
            const auto& p = j.at("pulse");
            maybe(p, "wavelength_nm", c.pulse.wavelength_nm);
            maybe(p, "peak_intensity_W_cm2", c.pulse.peak_intensity_W_cm2);
            maybe(p, "n_cycles", c.pulse.n_cycles);
            maybe(p, "carrier_phase", c.pulse.carrier_phase);
        }
        if (j.contains("molecule")) {
            const auto& m = j.at("molecule");
            maybe(m, "interatomic_distance_au", c.molecule.interatomic_distance_au);
            maybe(m, "softcore_param_au", c.molecule.softcore_param_au);
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            maybe(g, "x_min_au", c.grid.x_min);
            maybe(g, "x_max_au", c.grid.x_max);
            maybe(g, "n_points", c.grid.n_points);
            maybe(g, "absorber_width_au", c.grid.absorber_width);
        }
        if (j.contains("modes")) {
            const auto& m = j.at("modes");
            maybe(m, "q_cutoff", c.modes.q_cutoff);
            maybe(m, "coupling_g0", c.modes.coupling_g0);
        }
        if (j.contains("propagation")) maybe(j.at("propagation"), "dt_au", c.dt);
        if (j.contains("run")) {
            const auto& r = j.at("run");
            maybe(r, "r_sweep", c.r_sweep);
            maybe(r, "n_mol_sweep", c.n_mol_sweep);
            maybe(r, "outputs", c.outputs);
            maybe(r, "wigner_modes", c.wigner_modes);
            maybe(r, "wigner_selector", c.wigner_selector);
            maybe(r, "q_tilde_sweep", c.q_tilde_sweep);
        }
        maybe(j, "seed", c.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad field: ") + e.what());
    }
    // the mode comb is tied to the pulse carrier
    c.modes.omega_L_au = c.pulse.omega_L();
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate(const RunConfig& c) {
    try {
        c.pulse.validate();
        c.molecule.validate();
        c.grid.validate();
        c.modes.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(c.dt > 0.0)) throw ConfigError("config: dt_au must be positive");
    const double dt_max = 0.02 * 2.0 * units::pi / (c.modes.q_cutoff * c.modes.omega_L_au);
    if (c.dt > dt_max)
        throw ConfigError("config: dt_au too coarse for q_cutoff (needs <= " +
                          std::to_string(dt_max) + " a.u.)");
    if (c.r_sweep.empty()) throw ConfigError("config: r_sweep must be non-empty");
    if (c.n_mol_sweep.empty()) throw ConfigError("config: n_mol_sweep must be non-empty");
    if (c.outputs.empty()) throw ConfigError("config: outputs must be non-empty");
    for (double r : c.r_sweep)
        if (!(r > 0.0)) throw ConfigError("config: r_sweep entries must be positive");
    for (double n : c.n_mol_sweep)
        if (!(n >= 1.0)) throw ConfigError("config: n_mol_sweep entries must be >= 1");
    for (const auto& o : c.outputs)
        if (o != "spectrum" && o != "wigner" && o != "entangle")
            throw ConfigError("config: unknown output kind '" + o + "'");
    for (int q : c.wigner_modes)
        if (q < 1 || q > c.modes.q_cutoff) throw ConfigError("config: wigner mode out of range");
    for (int q : c.q_tilde_sweep)
        if (q < 1 || q >= c.modes.q_cutoff)
            throw ConfigError("config: q_tilde out of range [1, q_cutoff)");
    if (c.wigner_selector != "antibonding" && c.wigner_selector != "total")
        throw ConfigError("config: wigner_selector must be 'antibonding' or 'total'");
}

std::string resolve_cache_dir(const std::string& cli_flag) {
    if (!cli_flag.empty()) return cli_flag;
    if (const char* env = std::getenv("HHGQO_CACHE")) return env;
    return {};
}

std::string trace_cache_path(const RunConfig& config, double r, const std::string& cache_dir) {
    if (cache_dir.empty()) return {};
    Molecule mol = config.molecule;
    mol.interatomic_distance_au = r;
    return (std::filesystem::path(cache_dir) /
            ("trace_" + trace_cache_key(mol, config.pulse, config.grid, config.dt) + ".bin"))
        .string();
}

DipoleTrace get_trace(const RunConfig& config, double r, const std::string& cache_dir) {
    const std::string path = trace_cache_path(config, r, cache_dir);
    if (!path.empty() && std::filesystem::exists(path)) return load_trace(path);
    Molecule mol = config.molecule;
    mol.interatomic_distance_au = r;
    PropagationOptions opt;
    opt.dt = config.dt;
    opt.q_cutoff_hint = config.modes.q_cutoff;
    DipoleTrace trace;
    try {
        trace = propagate_semiclassical(mol, config.pulse, config.grid, opt);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("dipole stage: ") + e.what());
    }
    if (!path.empty()) {
        std::filesystem::create_directories(cache_dir);
        save_trace(trace, path);
    }
    return trace;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checksum: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

namespace {

struct PointOutputs {
    std::vector<std::string> files;
    double truncation_ratio = 0.0;
    double norm_Na = 0.0;
};

PointOutputs run_point(const RunConfig& config, double r, double n_mol,
                       const DipoleTrace& trace, const std::string& out_dir) {
    PointOutputs result;
    result.truncation_ratio = trace.truncation_ratio();
    const std::string suffix = "_R" + tag(r) + "_N" + tag(n_mol) + ".csv";
    const auto outpath = [&](const std::string& stem) {
        return (std::filesystem::path(out_dir) / (stem + suffix)).string();
    };

    const auto chi_b = displacement_set(trace, DipoleChannel::Bonding, config.modes, n_mol);
    const auto amps =
        transition_amplitudes(trace, config.modes, n_mol, trace.times.back());
    const JointState joint = assemble_joint(chi_b, amps);
    result.norm_Na = joint.total_norm_N - 1.0;

    const auto wants = [&](const char* kind) {
        return std::find(config.outputs.begin(), config.outputs.end(), kind) !=
               config.outputs.end();
    };

    if (wants("spectrum")) {
        const std::string path = outpath("spectrum");
        save_spectrum_csv(spectrum(joint), path);
        result.files.push_back(path);
    }
    if (wants("wigner")) {
        for (int q : config.wigner_modes) {
            SingleModeState mode;
            if (config.wigner_selector == "antibonding")
                mode = reduce_mode(condition(joint, ElectronState::Antibonding), q);
            else
                mode = reduce_mode(joint, q);
            const std::string path = outpath("wigner_q" + std::to_string(q));
            save_wigner_csv(wigner_single_mode(mode), path);
            result.files.push_back(path);
            result.files.push_back(path + ".json");
        }
    }
    if (wants("entangle")) {
        std::vector<int> splits = config.q_tilde_sweep;
        if (splits.empty())
            for (int q = 1; q < config.modes.q_cutoff; ++q) splits.push_back(q);

        EntanglementReport rep;
        rep.R = r;
        rep.n_mol = n_mol;
        rep.kind = "electron_entropy";
        rep.sweep = {n_mol};
        rep.values = {von_neumann_entropy(electron_reduced_density(joint))};
        const std::string epath = outpath("electron_entropy");
        save_entanglement_csv(rep, epath);
        result.files.push_back(epath);

        EntanglementReport part;
        part.R = r;
        part.n_mol = n_mol;
        part.kind = "partition_entropy_antibonding";
        const auto cond_a = condition(joint, ElectronState::Antibonding);
        for (int s : splits) {
            part.sweep.push_back(s);
            part.values.push_back(
                partition_entropy(cond_a, {PartitionSpec::Kind::Split, s}));
        }
        const std::string ppath = outpath("partition_entropy");
        save_entanglement_csv(part, ppath);
        result.files.push_back(ppath);

        EntanglementReport bound;
        bound.R = r;
        bound.n_mol = n_mol;
        bound.kind = "logneg_lower_bound";
        for (int s : splits) {
            bound.sweep.push_back(s);
            bound.values.push_back(logneg_lower_bound(joint, s).value);
        }
        const std::string bpath = outpath("logneg_bound");
        save_entanglement_csv(bound, bpath);
        result.files.push_back(bpath);
    }
    return result;
}

}  // namespace

RunManifest run(const RunConfig& config, const std::string& out_dir,
                const std::string& cache_dir, int threads) {
    validate(config);
    std::filesystem::create_directories(out_dir);
    RunManifest manifest;
    manifest.code_version = kCodeVersion;
    manifest.seed = config.seed;
    {
        // hash of the physics-relevant configuration
        std::ostringstream key;
        key.precision(17);
        key << config.pulse.wavelength_nm << '|' << config.pulse.peak_intensity_W_cm2 << '|'
            << config.pulse.n_cycles << '|' << config.pulse.carrier_phase << '|'
            << config.molecule.softcore_param_au << '|' << config.grid.x_min << '|'
            << config.grid.x_max << '|' << config.grid.n_points << '|'
            << config.grid.absorber_width << '|' << config.modes.q_cutoff << '|'
            << config.modes.coupling_g0 << '|' << config.dt << '|' << config.seed;
        for (double r : config.r_sweep) key << '|' << r;
        for (double n : config.n_mol_sweep) key << '|' << n;
        manifest.config_hash = fnv1a_hex(key.str());
    }

    using clock = std::chrono::steady_clock;
    std::mutex mtx;

    // Traces are the expensive stage; compute per R (parallel across R).
    std::vector<DipoleTrace> traces(config.r_sweep.size());
    const auto t0 = clock::now();
    {
        std::vector<std::thread> workers;
        std::exception_ptr error;
        std::size_t next = 0;
        const int n_workers =
            std::max(1, std::min<int>(threads, static_cast<int>(config.r_sweep.size())));
        for (int w = 0; w < n_workers; ++w)
            workers.emplace_back([&] {
                for (;;) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lk(mtx);
                        if (next >= config.r_sweep.size() || error) return;
                        i = next++;
                    }
                    try {
                        traces[i] = get_trace(config, config.r_sweep[i], cache_dir);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(mtx);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        for (auto& w : workers) w.join();
        if (error) std::rethrow_exception(error);
    }
    manifest.timings_s.emplace_back(
        "dipole", std::chrono::duration<double>(clock::now() - t0).count());

    const auto t1 = clock::now();
    for (std::size_t ir = 0; ir < config.r_sweep.size(); ++ir)
        for (double n_mol : config.n_mol_sweep) {
            PointOutputs point;
            try {
                point = run_point(config, config.r_sweep[ir], n_mol, traces[ir], out_dir);
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << "analysis stage (R=" << config.r_sweep[ir] << ", N=" << n_mol
                   << "): " << e.what();
                throw NumericalError(os.str());
            }
            manifest.max_truncation_ratio =
                std::max(manifest.max_truncation_ratio, point.truncation_ratio);
            manifest.max_norm_Na = std::max(manifest.max_norm_Na, point.norm_Na);
            for (const auto& f : point.files)
                manifest.outputs.emplace_back(f, file_checksum(f));
        }
    manifest.timings_s.emplace_back(
        "analysis", std::chrono::duration<double>(clock::now() - t1).count());

    std::sort(manifest.outputs.begin(), manifest.outputs.end());
    save_manifest(manifest, (std::filesystem::path(out_dir) / "manifest.json").string());
    return manifest;
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
    json j;
    j["config_hash"] = manifest.config_hash;
    j["code_version"] = manifest.code_version;
    j["seed"] = manifest.seed;
    j["max_truncation_ratio"] = manifest.max_truncation_ratio;
    j["max_norm_Na"] = manifest.max_norm_Na;
    j["timings_s"] = json::object();
    for (const auto& [stage, s] : manifest.timings_s) j["timings_s"][stage] = s;
    j["outputs"] = json::array();
    for (const auto& [file, sum] : manifest.outputs)
        j["outputs"].push_back({{"path", file}, {"fnv1a", sum}});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace hhgqo
