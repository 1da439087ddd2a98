#include "toruslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "toruslab/errors.hpp"
#include "toruslab/serialization.hpp"

namespace toruslab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void parse_fail(const std::string& origin, int line,
                             const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

// Splits a value line into the value text and drops a trailing comment,
// honoring quotes.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        else if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

ConfigValue parse_value(const std::string& raw, const std::string& origin,
                        int line) {
    std::string v = trim(raw);
    if (v.empty()) parse_fail(origin, line, "missing value");
    ConfigValue out;
    out.line = line;

    if (v.front() == '"') {
        auto close = v.find('"', 1);
        if (close == std::string::npos || trim(v.substr(close + 1)) != "")
            parse_fail(origin, line, "unterminated string value");
        out.value = v.substr(1, close - 1);
        return out;
    }
    if (v.front() == '[') {
        if (v.back() != ']') parse_fail(origin, line, "unterminated array value");
        std::string body = v.substr(1, v.size() - 2);
        std::vector<std::string> items;
        std::string cur;
        bool quoted = false;
        for (char c : body) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                items.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty() || !items.empty()) items.push_back(cur);
        std::vector<double> nums;
        std::vector<std::string> strs;
        for (auto& item : items) {
            std::string it = trim(item);
            if (it.empty()) parse_fail(origin, line, "empty array element");
            if (it.front() == '"') {
                if (it.size() < 2 || it.back() != '"')
                    parse_fail(origin, line, "malformed string array element");
                strs.push_back(it.substr(1, it.size() - 2));
            } else {
                double d;
                if (!parse_number(it, d))
                    parse_fail(origin, line, "malformed array element: " + it);
                nums.push_back(d);
            }
        }
        if (!nums.empty() && !strs.empty())
            parse_fail(origin, line, "mixed array element types");
        if (!strs.empty()) out.value = std::move(strs);
        else out.value = std::move(nums);
        return out;
    }
    if (v == "true" || v == "false") {
        out.value = (v == "true");
        return out;
    }
    double d;
    if (parse_number(v, d)) {
        out.value = d;
        return out;
    }
    parse_fail(origin, line, "unrecognized value: " + v);
}

std::string flat_key(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

long long integral_number(double v, const std::string& what) {
    if (!(std::floor(v) == v) || std::abs(v) > 9.0e18)
        throw ConfigError(what + " must be an integer");
    return static_cast<long long>(v);
}

std::vector<std::string> preset_search_dirs(const std::string& dir_override) {
    std::vector<std::string> dirs;
    if (!dir_override.empty()) dirs.push_back(dir_override);
    if (const char* env = std::getenv("TORUSLAB_PRESET_DIR"); env && *env)
        dirs.push_back(env);
    dirs.push_back("presets");
#ifdef TORUSLAB_DEFAULT_PRESET_DIR
    dirs.push_back(TORUSLAB_DEFAULT_PRESET_DIR);
#endif
    return dirs;
}

SweepSettings sweep_from_json(const nlohmann::json& j) {
    SweepSettings s;
    if (j.contains("r_grid")) s.r_grid = j.at("r_grid").get<std::vector<double>>();
    if (j.contains("ensemble")) s.ensemble = j.at("ensemble").get<int>();
    if (j.contains("budget_steps")) s.budget_steps = j.at("budget_steps").get<long long>();
    if (j.contains("dt")) s.dt = j.at("dt").get<double>();
    if (j.contains("threads")) s.threads = j.at("threads").get<int>();
    return s;
}

void validate_sweep(const SweepSettings& s) {
    if (s.r_grid.empty()) throw ConfigError("r_grid must be nonempty");
    for (double r : s.r_grid)
        if (!(r > 0.0)) throw ConfigError("r_grid entries must be positive");
    for (std::size_t i = 1; i < s.r_grid.size(); ++i)
        if (!(s.r_grid[i] < s.r_grid[i - 1]))
            throw ConfigError("r_grid must be strictly decreasing");
    if (s.ensemble < 1) throw ConfigError("ensemble must be >= 1");
    if (s.budget_steps < 1) throw ConfigError("budget_steps must be >= 1");
    if (s.dt < 0.0) throw ConfigError("dt must be >= 0");
    if (s.threads < 1) throw ConfigError("threads must be >= 1");
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& origin) {
    ConfigFile cf;
    cf.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                parse_fail(origin, lineno, "malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) parse_fail(origin, lineno, "empty section name");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            parse_fail(origin, lineno, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) parse_fail(origin, lineno, "empty key");
        std::string full = flat_key(section, key);
        if (cf.entries_.count(full))
            parse_fail(origin, lineno, "duplicate key: " + full);
        cf.entries_[full] = parse_value(s.substr(eq + 1), origin, lineno);
    }
    return cf;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = entries_.find(flat_key(section, key));
    if (it == entries_.end()) return false;
    read_[it->first] = true;
    return true;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    auto it = entries_.find(flat_key(section, key));
    if (it == entries_.end()) return fallback;
    read_[it->first] = true;
    if (auto* b = std::get_if<bool>(&it->second.value)) return *b;
    parse_fail(origin_, it->second.line, "expected a boolean for " + it->first);
}

double ConfigFile::get_number(const std::string& section,
                              const std::string& key, double fallback) const {
    auto it = entries_.find(flat_key(section, key));
    if (it == entries_.end()) return fallback;
    read_[it->first] = true;
    if (auto* d = std::get_if<double>(&it->second.value)) return *d;
    parse_fail(origin_, it->second.line, "expected a number for " + it->first);
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
    auto it = entries_.find(flat_key(section, key));
    if (it == entries_.end()) return fallback;
    read_[it->first] = true;
    if (auto* s = std::get_if<std::string>(&it->second.value)) return *s;
    parse_fail(origin_, it->second.line, "expected a string for " + it->first);
}

std::vector<double> ConfigFile::get_number_array(
    const std::string& section, const std::string& key,
    const std::vector<double>& fallback) const {
    auto it = entries_.find(flat_key(section, key));
    if (it == entries_.end()) return fallback;
    read_[it->first] = true;
    if (auto* a = std::get_if<std::vector<double>>(&it->second.value)) return *a;
    parse_fail(origin_, it->second.line, "expected a number array for " + it->first);
}

std::vector<std::string> ConfigFile::unread_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
        auto it = read_.find(k);
        if (it == read_.end() || !it->second) out.push_back(k);
    }
    return out;
}

Preset load_preset(const std::string& name, const std::string& dir_override) {
    namespace fs = std::filesystem;
    std::string path;
    if (name.size() > 5 && name.substr(name.size() - 5) == ".json" &&
        fs::exists(name)) {
        path = name;
    } else {
        for (const auto& dir : preset_search_dirs(dir_override)) {
            fs::path candidate = fs::path(dir) / (name + ".json");
            if (fs::exists(candidate)) {
                path = candidate.string();
                break;
            }
        }
    }
    if (path.empty()) {
        std::string dirs;
        for (const auto& d : preset_search_dirs(dir_override)) {
            if (!dirs.empty()) dirs += ", ";
            dirs += d;
        }
        throw ConfigError("preset not found: " + name + " (searched " + dirs + ")");
    }

    nlohmann::json j = read_json_file(path);
    Preset p;
    try {
        p.name = j.value("name", fs::path(path).stem().string());
        p.n = j.at("n").get<int>();
        p.omega = j.at("omega").get<std::vector<double>>();
        p.alpha = j.value("alpha", 1.0);
        p.tau = j.value("tau", -1.0);
        p.hamiltonian = series_from_json(j.at("hamiltonian"));
        if (j.contains("i_star"))
            p.i_star = j.at("i_star").get<std::vector<double>>();
        else
            p.i_star.assign(static_cast<std::size_t>(p.n), 0.0);
        if (j.contains("sweep")) p.sweep = sweep_from_json(j.at("sweep"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed preset " + path + ": " + e.what());
    }

    if (p.n < 1) throw ConfigError("preset dimension must be >= 1: " + path);
    if (static_cast<int>(p.omega.size()) != p.n)
        throw ConfigError("preset omega length does not match n: " + path);
    if (p.hamiltonian.dimension() != p.n)
        throw ConfigError("preset hamiltonian dimension does not match n: " + path);
    if (static_cast<int>(p.i_star.size()) != p.n)
        throw ConfigError("preset i_star length does not match n: " + path);
    if (p.alpha < 1.0) throw ConfigError("preset alpha must be >= 1: " + path);
    if (!p.sweep.r_grid.empty()) validate_sweep(p.sweep);
    return p;
}

std::vector<std::string> list_presets(const std::string& dir_override) {
    namespace fs = std::filesystem;
    std::set<std::string> names;
    for (const auto& dir : preset_search_dirs(dir_override)) {
        std::error_code ec;
        for (fs::directory_iterator it(dir, ec), end; it != end && !ec;
             it.increment(ec)) {
            if (it->path().extension() == ".json")
                names.insert(it->path().stem().string());
        }
    }
    return {names.begin(), names.end()};
}

ExperimentConfig resolve_experiment_config(const Preset& preset,
                                           const ConfigFile* config,
                                           std::uint64_t seed_flag,
                                           const std::string& out_flag,
                                           int threads_flag) {
    ExperimentConfig cfg;
    cfg.preset = preset;
    cfg.sweep = preset.sweep;

    if (config) {
        cfg.sweep.r_grid = config->get_number_array("sweep", "r_grid", cfg.sweep.r_grid);
        cfg.sweep.ensemble = static_cast<int>(integral_number(
            config->get_number("sweep", "ensemble", cfg.sweep.ensemble), "ensemble"));
        cfg.sweep.budget_steps = integral_number(
            config->get_number("sweep", "budget_steps",
                               static_cast<double>(cfg.sweep.budget_steps)),
            "budget_steps");
        cfg.sweep.dt = config->get_number("sweep", "dt", cfg.sweep.dt);
        cfg.sweep.threads = static_cast<int>(integral_number(
            config->get_number("sweep", "threads", cfg.sweep.threads), "threads"));
        cfg.master_seed = static_cast<std::uint64_t>(integral_number(
            config->get_number("experiment", "seed",
                               static_cast<double>(cfg.master_seed)),
            "seed"));
        cfg.out_dir = config->get_string("experiment", "out_dir", cfg.out_dir);

        auto leftover = config->unread_keys();
        if (!leftover.empty()) {
            std::string msg = "unknown config keys in " + config->origin() + ":";
            for (const auto& k : leftover) msg += " " + k;
            throw ConfigError(msg);
        }
    }

    if (seed_flag != 0) cfg.master_seed = seed_flag;
    if (!out_flag.empty()) cfg.out_dir = out_flag;
    if (threads_flag > 0) cfg.sweep.threads = threads_flag;

    validate_sweep(cfg.sweep);
    return cfg;
}

}  // namespace toruslab
