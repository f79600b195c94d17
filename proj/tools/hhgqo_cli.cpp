// Batch CLI for the HHG quantum-optics pipeline.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.

#include <complex>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hhgqo/entanglement.hpp"
#include "hhgqo/observables.hpp"
#include "hhgqo/oracle.hpp"
#include "hhgqo/pipeline.hpp"

namespace {

using namespace hhgqo;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string cache_flag;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
    auto* opt = cmd->add_option("--config", args.config_path, "run configuration (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--cache", args.cache_flag, "trace cache directory (or HHGQO_CACHE)");
    cmd->add_option("--threads", args.threads, "worker threads");
    cmd->add_option("--seed", args.seed, "seed recorded in the manifest")
        ->each([&](const std::string&) { args.seed_set = true; });
}

RunConfig load(const CommonArgs& args) {
    RunConfig config = load_config(args.config_path);
    if (args.seed_set) config.seed = args.seed;
    return config;
}

int run_outputs(const CommonArgs& args, const std::vector<std::string>& kinds,
                bool require_cached_trace) {
    RunConfig config = load(args);
    if (!kinds.empty()) {
        config.outputs = kinds;
        validate(config);
    }
    const std::string cache_dir = resolve_cache_dir(args.cache_flag);
    if (require_cached_trace) {
        for (double r : config.r_sweep) {
            const std::string path = trace_cache_path(config, r, cache_dir);
            if (path.empty() || !std::filesystem::exists(path)) {
                std::fprintf(stderr,
                             "error: no cached dipole trace for R=%g; run `dipole` first "
                             "(same --config and --cache)\n",
                             r);
                return 2;
            }
        }
    }
    const RunManifest manifest = run(config, args.out_dir, cache_dir, args.threads);
    std::printf("wrote %zu files to %s (config %s)\n", manifest.outputs.size(),
                args.out_dir.c_str(), manifest.config_hash.c_str());
    return 0;
}

int run_dipole(const CommonArgs& args) {
    RunConfig config = load(args);
    const std::string cache_dir = resolve_cache_dir(args.cache_flag);
    if (cache_dir.empty()) {
        std::fprintf(stderr,
                     "error: `dipole` persists traces; pass --cache or set HHGQO_CACHE\n");
        return 2;
    }
    for (double r : config.r_sweep) {
        const DipoleTrace trace = get_trace(config, r, cache_dir);
        std::printf("R=%g: %zu steps, truncation ratio %.3e, cached at %s\n", r, trace.size(),
                    trace.truncation_ratio(), trace_cache_path(config, r, cache_dir).c_str());
    }
    return 0;
}

// --- oracle case registry ------------------------------------------------

struct OracleCase {
    const char* id;
    const char* description;
    void (*fn)();
};

void case_coherent_mean() {
    DisplacedVacuum st;
    st.chi = {cdouble(0.5, 0.0)};
    DenseState dense = densify(st, 8);
    fold_displacement(dense);
    OperatorSpec num{OperatorSpec::Kind::Number, 1, {}};
    std::printf("dense <n> of D(0.5)|0> (folded, cutoff 8) = %.12f  (coherent law: 0.25)\n",
                dense_expectation(dense, num));
}

void case_single_photon_parity() {
    PhotonAddedState st = make_photon_added({cdouble(0, 0)}, {cdouble(1, 0)}, 0.0);
    DenseState dense = densify(st, 4);
    OperatorSpec par{OperatorSpec::Kind::Parity, 1, {}};
    std::printf("dense parity of |1> = %.12f  (exact: -1)\n", dense_expectation(dense, par));
}

void case_displaced_number() {
    DisplacedVacuum st;
    st.chi = {cdouble(1.0, 0.0)};
    DenseState dense = densify(st, 6);
    OperatorSpec num{OperatorSpec::Kind::Number, 1, {}};
    std::printf("dense <n> of D(1)|0> (analytic record) = %.12f  (exact: 1)\n",
                dense_expectation(dense, num));
}

void case_mixed_mean_photon() {
    PhotonAddedState st = make_photon_added({cdouble(0, 0)}, {cdouble(1, 0)}, cdouble(1, 0));
    DenseState dense = densify(st, 4);
    OperatorSpec num{OperatorSpec::Kind::Number, 1, {}};
    std::printf("dense <n> of (|1>+|0>)/sqrt2 = %.12f, closed form = %.12f  (exact: 0.5)\n",
                dense_expectation(dense, num), mean_photon_number(st, 1));
}

void case_bell_negativity() {
    // (|00> + |11>)/sqrt2 embedded in two Fock modes
    DenseState bell;
    bell.mode_count = 2;
    bell.fock_cutoff = 2;
    bell.displacement.assign(2, cdouble(0, 0));
    bell.coeff.assign(bell.dim(), cdouble(0, 0));
    const double inv = 1.0 / std::sqrt(2.0);
    bell.coeff[0] = inv;                                // |0 0>
    bell.coeff[bell.stride(0) + bell.stride(1)] = inv;  // |1 1>
    std::printf("dense negativity of a Fock-embedded Bell pair = %.12f  (exact: 0.5)\n",
                dense_partial_transpose_negativity({{1.0, bell}}, {1}));
}

void case_schmidt_product() {
    // rank-2 toy state: negativity must equal the Schmidt product s1*s2
    PhotonAddedState st = make_photon_added({cdouble(0, 0), cdouble(0, 0)},
                                            {cdouble(0.6, 0.1), cdouble(0.2, -0.3)},
                                            cdouble(0.35, 0.2));
    ConditionedField cf;
    cf.chi_frame = st.chi_frame;
    const double inv = 1.0 / std::sqrt(st.norm_Na);
    cf.vac = inv * st.H2;
    cf.one = {inv * st.h1[0], inv * st.h1[1]};
    const double neg = dense_partial_transpose_negativity({{1.0, densify(cf, 4)}}, {1});
    const double h1q2 = std::norm(cf.one[0]);
    const double nb = std::norm(cf.one[1]);
    std::printf("dense negativity = %.12f, Schmidt product = %.12f\n", neg,
                std::sqrt(h1q2 * nb));
}

const OracleCase kCases[] = {
    {"coherent-mean", "mean photon number of D(0.5)|0> via folded displacement", case_coherent_mean},
    {"single-photon-parity", "parity of |1>", case_single_photon_parity},
    {"displaced-number", "mean photon number of D(1)|0> via the analytic record", case_displaced_number},
    {"mixed-mean-photon", "closed-form vs dense <n> for (|1>+|0>)/sqrt2", case_mixed_mean_photon},
    {"bell-negativity", "partial-transpose negativity of a Bell pair", case_bell_negativity},
    {"schmidt-product", "pure-state negativity equals s1*s2", case_schmidt_product},
};

int run_oracle(const std::string& case_id, bool list) {
    if (list || case_id.empty()) {
        for (const auto& c : kCases) std::printf("%-22s %s\n", c.id, c.description);
        return list ? 0 : 2;
    }
    for (const auto& c : kCases)
        if (case_id == c.id) {
            c.fn();
            return 0;
        }
    std::fprintf(stderr, "error: unknown oracle case '%s' (try --list)\n", case_id.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-harmonic-generation quantum optics pipeline"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* cmd_run = app.add_subcommand("run", "full pipeline: traces + all configured outputs");
    add_common(cmd_run, args, true);
    auto* cmd_dipole = app.add_subcommand("dipole", "compute and cache dipole traces");
    add_common(cmd_dipole, args, true);
    auto* cmd_spectrum = app.add_subcommand("spectrum", "photon-number spectra from cached traces");
    add_common(cmd_spectrum, args, true);
    auto* cmd_wigner = app.add_subcommand("wigner", "single-mode Wigner maps from cached traces");
    add_common(cmd_wigner, args, true);
    auto* cmd_entangle = app.add_subcommand("entangle", "entanglement reports from cached traces");
    add_common(cmd_entangle, args, true);
    auto* cmd_validate = app.add_subcommand("validate-config", "check a configuration file");
    add_common(cmd_validate, args, true);

    std::string case_id;
    bool list_cases = false;
    auto* cmd_oracle = app.add_subcommand("oracle", "reproduce a tagged brute-force example");
    cmd_oracle->add_option("--case", case_id, "case id");
    cmd_oracle->add_flag("--list", list_cases, "list available cases");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_validate->parsed()) {
            load(args);
            std::printf("OK: %s\n", args.config_path.c_str());
            return 0;
        }
        if (cmd_oracle->parsed()) return run_oracle(case_id, list_cases);
        if (cmd_dipole->parsed()) return run_dipole(args);
        if (cmd_run->parsed()) return run_outputs(args, {}, false);
        if (cmd_spectrum->parsed()) return run_outputs(args, {"spectrum"}, true);
        if (cmd_wigner->parsed()) return run_outputs(args, {"wigner"}, true);
        if (cmd_entangle->parsed()) return run_outputs(args, {"entangle"}, true);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
