#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "hhgqo/pipeline.hpp"

using namespace hhgqo;

namespace {

// cheap configuration: tiny grid, weak short pulse, few modes
const char* kToyConfig = R"({
  "pulse": {"wavelength_nm": 800.0, "peak_intensity_W_cm2": 5e13, "n_cycles": 1},
  "molecule": {"interatomic_distance_au": 2.0, "softcore_param_au": 1.0},
  "grid": {"x_min_au": -80.0, "x_max_au": 80.0, "n_points": 512, "absorber_width_au": 15.0},
  "modes": {"q_cutoff": 10, "coupling_g0": 1e-4},
  "propagation": {"dt_au": 0.1},
  "run": {
    "r_sweep": [2.0],
    "n_mol_sweep": [1.0, 100.0],
    "outputs": ["spectrum", "wigner", "entangle"],
    "wigner_modes": [2, 3],
    "q_tilde_sweep": [2, 5]
  },
  "seed": 42
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const char* stem)
        : path(std::filesystem::temp_directory_path() / stem) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing applies defaults and overrides") {
    const auto c = parse_config(kToyConfig);
    CHECK(c.pulse.n_cycles == 1);
    CHECK(c.grid.n_points == 512);
    CHECK(c.modes.q_cutoff == 10);
    CHECK(c.modes.omega_L_au == doctest::Approx(c.pulse.omega_L()));
    CHECK(c.r_sweep == std::vector<double>{2.0});
    CHECK(c.seed == 42);
}

TEST_CASE("config validation failures") {
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"run": {"r_sweep": []}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"run": {"outputs": ["plots"]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"propagation": {"dt_au": 0.5},
                                     "modes": {"q_cutoff": 100}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"run": {"wigner_modes": [500]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"run": {"n_mol_sweep": [0.5]}})"), ConfigError);
}

TEST_CASE("cache dir resolution prefers the CLI flag over the environment") {
    setenv("HHGQO_CACHE", "/tmp/env-cache", 1);
    CHECK(resolve_cache_dir("/tmp/flag-cache") == "/tmp/flag-cache");
    CHECK(resolve_cache_dir("") == "/tmp/env-cache");
    unsetenv("HHGQO_CACHE");
    CHECK(resolve_cache_dir("") == "");
}

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("end-to-end toy run: outputs, manifest, determinism, cache") {
    const auto config = parse_config(kToyConfig);
    TempDir out1("hhgqo_out1"), out2("hhgqo_out2"), cache("hhgqo_cache");

    const auto m1 = run(config, out1.path.string(), cache.path.string(), 2);
    CHECK(!m1.outputs.empty());
    CHECK(m1.max_truncation_ratio < 10.0);
    CHECK(std::filesystem::exists(out1.path / "manifest.json"));
    // every listed output exists with a matching checksum
    for (const auto& [file, sum] : m1.outputs) {
        CHECK(std::filesystem::exists(file));
        CHECK(file_checksum(file) == sum);
    }
    // expected kinds present
    CHECK(std::filesystem::exists(out1.path / "spectrum_R2_N1.csv"));
    CHECK(std::filesystem::exists(out1.path / "spectrum_R2_N100.csv"));
    CHECK(std::filesystem::exists(out1.path / "wigner_q2_R2_N1.csv"));
    CHECK(std::filesystem::exists(out1.path / "wigner_q2_R2_N1.csv.json"));
    CHECK(std::filesystem::exists(out1.path / "partition_entropy_R2_N1.csv"));
    CHECK(std::filesystem::exists(out1.path / "logneg_bound_R2_N1.csv"));
    CHECK(std::filesystem::exists(out1.path / "electron_entropy_R2_N1.csv"));

    // second run hits the trace cache and must be byte-identical
    const auto m2 = run(config, out2.path.string(), cache.path.string(), 2);
    REQUIRE(m1.outputs.size() == m2.outputs.size());
    for (std::size_t i = 0; i < m1.outputs.size(); ++i) {
        const auto rel = std::filesystem::path(m1.outputs[i].first).filename();
        CHECK(slurp((out1.path / rel).string()) == slurp((out2.path / rel).string()));
    }
    CHECK(m1.config_hash == m2.config_hash);
}

TEST_CASE("trace cache path is stable and empty when disabled") {
    const auto config = parse_config(kToyConfig);
    CHECK(trace_cache_path(config, 2.0, "") == "");
    const auto p1 = trace_cache_path(config, 2.0, "/tmp/c");
    CHECK(p1 == trace_cache_path(config, 2.0, "/tmp/c"));
    CHECK(p1 != trace_cache_path(config, 2.5, "/tmp/c"));
}
