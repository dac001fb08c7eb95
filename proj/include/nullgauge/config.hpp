#pragma once

#include <cerrno>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nullgauge/error.hpp"
#include "nullgauge/grid.hpp"

namespace nullgauge {

enum class ValueKind { integer, real, text, choice };

struct KeySpec {
    std::string key;  // section.name, or a bare name for top-level keys
    ValueKind kind;
    std::string fallback;
    double lo = -1e300;
    double hi = 1e300;
    std::vector<std::string> choices{};
    bool nonzero = false;
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"kgm",       "unitary",    "em-only",        "compare",
                                                "bohm",      "dirac-flow", "majorana-suite", "convergence"};
    return names;
}

// Every accepted key with its default and admissible range.
inline const std::vector<KeySpec>& config_schema() {
    using K = ValueKind;
    static const std::vector<KeySpec> schema{
        {"scenario", K::choice, "", 0, 0, scenario_names()},
        {"grid.n_x", K::integer, "512", 8, 1 << 16},
        {"grid.dx", K::real, "0.05", 1e-6, 1e3},
        {"grid.dt", K::real, "0.01", 1e-9, 1e3},
        {"physics.e", K::real, "1", -1e3, 1e3},
        {"physics.m", K::real, "1", 1e-9, 1e3},
        {"initial.recipe", K::choice, "neutral_packet", 0, 0, {"neutral_packet", "plane_wave", "zero", "csv", "cos_profile"}},
        {"initial.amplitude", K::real, "0.2", 0.0, 1e3},
        {"initial.bump", K::real, "0.3", 0.0, 1e3},
        {"initial.width", K::real, "1.5", 1e-6, 1e3},
        {"initial.frequency", K::real, "1", -1e3, 1e3},
        {"initial.profile_eps", K::real, "1", 1e-6, 1e3},
        {"initial.momentum", K::real, "0.5", -1e3, 1e3},
        {"initial.mode", K::integer, "1", -100000, 100000},
        {"initial.cos_a", K::real, "0.1", -1e6, 1e6},
        {"initial.cos_c", K::real, "1", -1e6, 1e6},
        {"initial.file", K::text, ""},
        {"run.t_end", K::real, "1", 0.0, 1e6},
        {"run.output_interval", K::real, "0.1", 0.0, 1e6},
        {"run.seed", K::integer, "12345", 0, 9.2e18},
        {"run.output_dir", K::text, "out"},
        {"run.particles", K::integer, "10000", 1, 1e7},
        {"run.bins", K::integer, "64", 1, 1e6},
        {"run.potential", K::choice, "rapidity", 0, 0, {"rapidity", "unconstrained", "uniform"}},
        {"run.rapidity_amplitude", K::real, "0.3", 0.0, 10.0},
        {"run.dtau", K::real, "0.001", 1e-9, 10.0},
        {"run.n_steps", K::integer, "10000", 1, 1e8},
        {"run.x0", K::real, "0.7", -1e6, 1e6},
        {"run.trials", K::integer, "1000", 1, 1e7},
        {"run.refinements", K::integer, "3", 3, 3},
        {"tolerances.charge_drift", K::real, "1e-6", 0.0, 1e300},
        {"tolerances.node_threshold_rel", K::real, "1e-8", 0.0, 1.0},
        {"tolerances.b0_floor_rel", K::real, "1e-6", 0.0, 1.0},
        {"tolerances.radicand_rel", K::real, "1e-10", 0.0, 1.0},
        {"tolerances.compare_divergence", K::real, "1e-2", 0.0, 1e300},
        {"tolerances.bohm_l1", K::real, "0.05", 0.0, 2.0},
        {"tolerances.path_agreement", K::real, "1e-6", 0.0, 1e300},
        {"tolerances.mass_shell", K::real, "1e-8", 0.0, 1e300},
        {"tolerances.control_divergence", K::real, "1e-2", 0.0, 1e300},
        {"tolerances.null_current", K::real, "1e-12", 0.0, 1e300},
        {"tolerances.nullspace", K::real, "1e-10", 0.0, 1e300},
        {"tolerances.identity", K::real, "1e-10", 0.0, 1e300},
        {"tolerances.mutation", K::real, "1e-2", 0.0, 1e300},
        {"tolerances.phase", K::real, "1e-10", 0.0, 1e300},
        {"tolerances.order_min", K::real, "1.7", -1e300, 1e300},
    };
    return schema;
}

inline const KeySpec* find_key(const std::string& key) {
    for (const auto& s : config_schema())
        if (s.key == key) return &s;
    return nullptr;
}

struct ConfigValue {
    std::string text;
    int line = 0;  // 0 for defaults, -1 for command-line overrides
};

class ScenarioConfig {
public:
    const std::string& scenario() const { return values_.at("scenario").text; }
    const std::map<std::string, ConfigValue>& values() const { return values_; }
    std::map<std::string, ConfigValue>& values() { return values_; }

    double real(const std::string& key) const { return std::strtod(get(key).c_str(), nullptr); }
    long long integer(const std::string& key) const { return std::strtoll(get(key).c_str(), nullptr, 10); }
    const std::string& text(const std::string& key) const { return get(key); }
    bool explicitly_set(const std::string& key) const {
        auto it = values_.find(key);
        return it != values_.end() && it->second.line != 0;
    }

    GridSpec grid() const {
        return GridSpec(static_cast<std::size_t>(integer("grid.n_x")), real("grid.dx"), real("grid.dt"));
    }
    PhysicalConstants constants() const { return PhysicalConstants(real("physics.e"), real("physics.m")); }

    std::string base_dir;  // directory of the config file, for relative paths

private:
    const std::string& get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("config: no value for key " + key);
        return it->second.text;
    }
    std::map<std::string, ConfigValue> values_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string where(int line) {
    if (line > 0) return "line " + std::to_string(line);
    if (line < 0) return "override";
    return "default";
}

// Checks one value against its spec; returns an error message or empty.
inline std::string check_value(const KeySpec& spec, const std::string& v) {
    switch (spec.kind) {
        case ValueKind::integer: {
            errno = 0;
            char* end = nullptr;
            const long long x = std::strtoll(v.c_str(), &end, 10);
            if (v.empty() || *end != '\0' || errno) return "'" + v + "' is not an integer";
            if (x < spec.lo || x > spec.hi)
                return "value " + v + " out of range [" + std::to_string(static_cast<long long>(spec.lo)) + ", " +
                       std::to_string(static_cast<long long>(spec.hi)) + "]";
            return "";
        }
        case ValueKind::real: {
            errno = 0;
            char* end = nullptr;
            const double x = std::strtod(v.c_str(), &end);
            if (v.empty() || *end != '\0' || errno || !std::isfinite(x)) return "'" + v + "' is not a finite number";
            if (x < spec.lo || x > spec.hi) {
                std::ostringstream o;
                o << "value " << v << " out of range [" << spec.lo << ", " << spec.hi << "]";
                return o.str();
            }
            if (spec.nonzero && x == 0.0) return "value must be nonzero";
            return "";
        }
        case ValueKind::choice: {
            for (const auto& c : spec.choices)
                if (c == v) return "";
            std::string all;
            for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
            return "'" + v + "' is not one of: " + all;
        }
        case ValueKind::text:
            return "";
    }
    return "";
}

// Resolves a bare top-level name like n_x to its section when that is unambiguous.
inline std::string resolve_key(const std::string& section, const std::string& name) {
    if (!section.empty()) return section + "." + name;
    if (find_key(name)) return name;
    std::string found;
    int hits = 0;
    for (const auto& s : config_schema()) {
        const auto dot = s.key.find('.');
        if (dot != std::string::npos && s.key.substr(dot + 1) == name) {
            found = s.key;
            ++hits;
        }
    }
    return hits == 1 ? found : name;
}

}  // namespace detail

// Cross-field checks after every value passed its own range check.
inline void validate_config(const ScenarioConfig& cfg, std::vector<std::string>& errors) {
    auto line_of = [&](const std::string& k) { return detail::where(cfg.values().at(k).line); };
    if (cfg.values().at("scenario").text.empty()) errors.push_back("missing required key 'scenario'");
    const double dx = cfg.real("grid.dx"), dt = cfg.real("grid.dt");
    if (dt / dx > 0.5) {
        std::ostringstream o;
        o << line_of("grid.dt") << ": CFL guard violated: dt/dx = " << dt / dx
          << " exceeds 0.5; the explicit steppers are unstable beyond it, reduce dt or increase dx";
        errors.push_back(o.str());
    }
    if (cfg.text("initial.recipe") == "csv" && cfg.text("initial.file").empty())
        errors.push_back(line_of("initial.recipe") + ": recipe 'csv' requires initial.file");
}

// Parses the INI-style text: optional top-level keys, [section] headers, key = value lines,
// comments starting with '#' or ';'. Unknown keys, duplicates and out-of-range values are errors;
// all errors are collected and reported together.
inline ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::vector<std::string> errors;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (line == 1 && raw.size() >= 3 && raw.compare(0, 3, "\xEF\xBB\xBF") == 0) raw = raw.substr(3);
        const std::string s = detail::trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
        if (s[0] == '[') {
            const auto close = s.find(']');
            if (close == std::string::npos) {
                errors.push_back("line " + std::to_string(line) + ", column " + std::to_string(indent) +
                                 ": unterminated section header");
                continue;
            }
            const std::string rest = detail::trim(s.substr(close + 1));
            if (!rest.empty() && rest[0] != '#' && rest[0] != ';') {
                errors.push_back("line " + std::to_string(line) + ", column " +
                                 std::to_string(indent + static_cast<int>(close) + 1) +
                                 ": unexpected text after section header");
                continue;
            }
            section = detail::trim(s.substr(1, close - 1));
            static const std::vector<std::string> sections{"grid", "physics", "initial", "run", "tolerances"};
            if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
                errors.push_back("line " + std::to_string(line) + ": unknown section [" + section + "]");
                section = "?";
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line) + ", column " + std::to_string(indent) +
                             ": expected 'key = value'");
            continue;
        }
        const std::string name = detail::trim(s.substr(0, eq));
        std::string value = detail::trim(s.substr(eq + 1));
        for (const char* mark : {" #", " ;", "\t#", "\t;"}) {
            const auto c = value.find(mark);
            if (c != std::string::npos) value = detail::trim(value.substr(0, c));
        }
        if (name.empty()) {
            errors.push_back("line " + std::to_string(line) + ", column " + std::to_string(indent) + ": empty key");
            continue;
        }
        if (section == "?") continue;
        const std::string key = detail::resolve_key(section, name);
        const KeySpec* spec = find_key(key);
        if (!spec) {
            errors.push_back("line " + std::to_string(line) + ": unknown key '" + key + "'");
            continue;
        }
        auto it = cfg.values().find(key);
        if (it != cfg.values().end()) {
            errors.push_back("line " + std::to_string(line) + ": duplicate key '" + key + "' (first set on line " +
                             std::to_string(it->second.line) + ")");
            continue;
        }
        const std::string err = detail::check_value(*spec, value);
        if (!err.empty()) errors.push_back("line " + std::to_string(line) + ": " + key + ": " + err);
        cfg.values()[key] = {value, line};
    }
    for (const auto& spec : config_schema())
        if (!cfg.values().count(spec.key)) cfg.values()[spec.key] = {spec.fallback, 0};
    if (errors.empty()) validate_config(cfg, errors);
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

// Applies "section.key=value" on top of a parsed config and revalidates.
inline void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string name = detail::trim(assignment.substr(0, eq));
    const std::string value = detail::trim(assignment.substr(eq + 1));
    const std::string key = detail::resolve_key("", name);
    const KeySpec* spec = find_key(key);
    if (!spec) throw ConfigError("override: unknown key '" + name + "'");
    const std::string err = detail::check_value(*spec, value);
    if (!err.empty()) throw ConfigError("override: " + key + ": " + err);
    cfg.values()[key] = {value, -1};
    std::vector<std::string> errors;
    validate_config(cfg, errors);
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
}

}  // namespace nullgauge
