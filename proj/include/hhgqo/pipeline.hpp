#ifndef HHGQO_PIPELINE_HPP
#define HHGQO_PIPELINE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hhgqo/dipole.hpp"
#include "hhgqo/field.hpp"

namespace hhgqo {

// Batch pipeline: config -> cached dipole trace -> amplitudes -> states ->
// CSV/JSON reports.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Pulse pulse;
    Molecule molecule;  // interatomic distance is overridden by r_sweep entries
    SpatialGrid grid{-400.0, 400.0, 8192, 80.0};
    ModeSet modes;
    double dt = 0.02;

    std::vector<double> r_sweep{2.0};
    std::vector<double> n_mol_sweep{1.0};
    std::vector<std::string> outputs{"spectrum"};
    std::vector<int> wigner_modes;
    std::string wigner_selector = "antibonding";  // or "total"
    std::vector<int> q_tilde_sweep;               // empty = every split 1..q_c-1
    std::uint64_t seed = 0;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& config);  // throws ConfigError

/// Cache directory resolution: CLI flag > HHGQO_CACHE env var > "" (disabled).
std::string resolve_cache_dir(const std::string& cli_flag);

/// Loads the trace from the cache when the metadata key matches, otherwise
/// propagates and stores it (if the cache is enabled).
DipoleTrace get_trace(const RunConfig& config, double r, const std::string& cache_dir);

/// Cache file path for a parameter point; empty when the cache is disabled.
std::string trace_cache_path(const RunConfig& config, double r, const std::string& cache_dir);

struct RunManifest {
    std::string config_hash;
    std::string code_version;
    std::vector<std::pair<std::string, double>> timings_s;      // stage, seconds
    std::vector<std::pair<std::string, std::string>> outputs;   // path, checksum
    double max_truncation_ratio = 0.0;  // max_t|mu_ab| / max_t|mu_bb| over sweep
    double max_norm_Na = 0.0;           // perturbative-validity flag
    std::uint64_t seed = 0;
};

RunManifest run(const RunConfig& config, const std::string& out_dir,
                const std::string& cache_dir, int threads);

void save_manifest(const RunManifest& manifest, const std::string& path);

std::string fnv1a_hex(const std::string& bytes);
std::string file_checksum(const std::string& path);

}  // namespace hhgqo

#endif
