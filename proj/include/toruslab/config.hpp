#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "toruslab/fourier_taylor.hpp"

namespace toruslab {

// Minimal TOML subset: [section] headers, key = value with strings,
// booleans, numbers and flat arrays, # comments. Unknown keys are the
// caller's problem; the parser only rejects malformed lines.
struct ConfigValue {
    std::variant<bool, double, std::string, std::vector<double>,
                 std::vector<std::string>>
        value;
    int line = 0;
};

class ConfigFile {
  public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text,
                                   const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    double get_number(const std::string& section, const std::string& key,
                      double fallback) const;
    std::string get_string(const std::string& section,
                           const std::string& key,
                           const std::string& fallback) const;
    std::vector<double> get_number_array(
        const std::string& section, const std::string& key,
        const std::vector<double>& fallback) const;

    // Keys never read back, for unknown-key diagnostics.
    std::vector<std::string> unread_keys() const;
    const std::string& origin() const { return origin_; }

  private:
    // Flattened as "section.key".
    std::map<std::string, ConfigValue> entries_;
    mutable std::map<std::string, bool> read_;
    std::string origin_;
};

struct SweepSettings {
    std::vector<double> r_grid;
    int ensemble = 64;
    long long budget_steps = 10'000'000;
    double dt = 0.0;  // 0 selects the step-size heuristic
    int threads = 1;
};

struct Preset {
    std::string name;
    int n = 0;
    std::vector<double> omega;
    double alpha = 1.0;
    double tau = -1.0;  // negative means tau = n - 1
    FourierTaylorSeries hamiltonian{1, 0, 0};
    std::vector<double> i_star;
    SweepSettings sweep;
};

// Looks in dir override, then $TORUSLAB_PRESET_DIR, then ./presets, then
// the directory compiled in at build time.
Preset load_preset(const std::string& name,
                   const std::string& dir_override = "");
std::vector<std::string> list_presets(const std::string& dir_override = "");

struct ExperimentConfig {
    Preset preset;
    SweepSettings sweep;
    std::uint64_t master_seed = 0;
    std::string out_dir = "out";
};

// Precedence: config file values override the preset, which overrides
// built-in defaults.
ExperimentConfig resolve_experiment_config(const Preset& preset,
                                           const ConfigFile* config,
                                           std::uint64_t seed_flag,
                                           const std::string& out_flag,
                                           int threads_flag);

}  // namespace toruslab
