#pragma once

// Flat "key = value" run configuration. '#' starts a comment; blank lines
// are ignored. Unknown and duplicate keys are rejected.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "feos/error.hpp"
#include "feos/grid.hpp"
#include "feos/initial.hpp"
#include "feos/splitting.hpp"
#include "feos/text.hpp"

namespace feos {

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;  // 0 for command-line overrides
};

using KeyValues = std::vector<ConfigEntry>;

inline constexpr std::array<std::string_view, 13> kConfigKeys = {
    "dims", "J",        "L",  "delta", "tau", "T",      "safety", "diag_every", "snapshot_times",
    "ic",   "seed",     "rng", "out_dir"};

struct ConfigFile {
    int dims = 2;
    int J = 128;
    double L = std::numbers::pi;
    double delta = 0.1;
    double tau = 0.01;
    bool tau_defaulted = false;
    double T = 1.0;
    double safety = kDefaultSafety;
    long diag_every = 10;
    std::vector<double> snapshot_times;
    InitialKind ic = InitialKind::Ts32Trig;
    std::optional<std::uint64_t> seed;
    std::string rng = std::string(SplitMix64::name);
    std::string out_dir = "out";
};

inline KeyValues parse_key_values(std::string_view text) {
    KeyValues entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        for (const auto& e : entries) {
            if (e.key == key) {
                throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                                  std::string(key) + "' (first set on line " + std::to_string(e.line) + ")");
            }
        }
        entries.push_back({std::string(key), std::string(value), line_no});
    }
    return entries;
}

/// Applies a "key=value" override, replacing any existing entry.
inline void apply_override(KeyValues& entries, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    }
    const std::string key(text::trim(assignment.substr(0, eq)));
    const std::string value(text::trim(assignment.substr(eq + 1)));
    auto it = std::find_if(entries.begin(), entries.end(), [&](const ConfigEntry& e) { return e.key == key; });
    if (it != entries.end()) {
        it->value = value;
        it->line = 0;
    } else {
        entries.push_back({key, value, 0});
    }
}

namespace detail {

inline std::string where(const ConfigEntry& e) {
    return e.line > 0 ? " (line " + std::to_string(e.line) + ")" : std::string(" (override)");
}

/// Reals, with "pi", "2pi" or "2*pi" accepted for multiples of pi.
inline double config_real(const ConfigEntry& e) {
    std::string_view s = text::trim(e.value);
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        std::string_view factor = text::trim(s.substr(0, s.size() - 2));
        if (!factor.empty() && factor.back() == '*') factor = text::trim(factor.substr(0, factor.size() - 1));
        if (factor.empty()) return std::numbers::pi;
        if (auto f = text::parse_double(factor)) return *f * std::numbers::pi;
    } else if (auto v = text::parse_double(s)) {
        return *v;
    }
    throw ConfigError("key '" + e.key + "': '" + e.value + "' is not a number" + where(e));
}

template <class Int>
Int config_integer(const ConfigEntry& e) {
    if (auto v = text::parse_integer<Int>(e.value)) return *v;
    throw ConfigError("key '" + e.key + "': '" + e.value + "' is not an integer" + where(e));
}

inline std::vector<double> config_real_list(const ConfigEntry& e) {
    std::vector<double> out;
    if (text::trim(e.value).empty()) return out;
    for (auto part : text::split(e.value, ',')) {
        ConfigEntry item{e.key, std::string(text::trim(part)), e.line};
        out.push_back(config_real(item));
    }
    return out;
}

}  // namespace detail

/// Validates entries and applies defaults (tau = delta / 10, safety = 0.9).
inline ConfigFile resolve_config(const KeyValues& entries) {
    for (const auto& e : entries) {
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), e.key) == kConfigKeys.end()) {
            throw ConfigError("unknown config key '" + e.key + "'" + detail::where(e));
        }
    }
    auto find = [&](std::string_view key) -> const ConfigEntry* {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    };
    auto require = [&](std::string_view key) -> const ConfigEntry& {
        if (const auto* e = find(key)) return *e;
        throw ConfigError("missing required config key '" + std::string(key) + "'");
    };

    ConfigFile cfg;
    cfg.dims = detail::config_integer<int>(require("dims"));
    cfg.J = detail::config_integer<int>(require("J"));
    cfg.L = detail::config_real(require("L"));
    cfg.delta = detail::config_real(require("delta"));
    cfg.T = detail::config_real(require("T"));
    cfg.ic = parse_initial_kind(text::trim(require("ic").value));

    if (const auto* e = find("tau")) {
        cfg.tau = detail::config_real(*e);
    } else {
        cfg.tau = cfg.delta / 10.0;
        cfg.tau_defaulted = true;
    }
    if (const auto* e = find("safety")) cfg.safety = detail::config_real(*e);
    if (const auto* e = find("diag_every")) cfg.diag_every = detail::config_integer<long>(*e);
    if (const auto* e = find("snapshot_times")) cfg.snapshot_times = detail::config_real_list(*e);
    if (const auto* e = find("seed")) cfg.seed = detail::config_integer<std::uint64_t>(*e);
    if (const auto* e = find("rng")) cfg.rng = std::string(text::trim(e->value));
    if (const auto* e = find("out_dir")) cfg.out_dir = std::string(text::trim(e->value));

    // Grid invariants are reported against their keys.
    try {
        (void)Grid(cfg.dims, cfg.J, cfg.L);
    } catch (const ConfigError& err) {
        throw ConfigError(std::string("keys 'dims'/'J'/'L': ") + err.what());
    }
    if (!(cfg.delta > 0.0)) throw ConfigError("key 'delta' must be > 0");
    if (!(cfg.tau > 0.0)) throw ConfigError("key 'tau' must be > 0");
    if (!(cfg.T > 0.0)) throw ConfigError("key 'T' must be > 0");
    if (!(cfg.safety > 0.0 && cfg.safety <= 1.0)) throw ConfigError("key 'safety' must lie in (0, 1]");
    if (cfg.diag_every < 0) throw ConfigError("key 'diag_every' must be >= 0");
    if (cfg.rng != SplitMix64::name) {
        throw ConfigError("key 'rng': unsupported generator '" + cfg.rng + "' (only splitmix64)");
    }
    if (cfg.ic == InitialKind::UniformRandom && !cfg.seed) {
        throw ConfigError("key 'seed' is required when ic = uniform-random");
    }
    if (cfg.ic == InitialKind::Ts32Trig && cfg.dims != 2) throw ConfigError("key 'ic': ts32-trig requires dims = 2");
    if (cfg.ic == InitialKind::Ex1Trig && cfg.dims != 1) throw ConfigError("key 'ic': ex1-trig requires dims = 1");
    if (cfg.out_dir.empty()) throw ConfigError("key 'out_dir' must not be empty");
    return cfg;
}

inline ConfigFile parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
    KeyValues entries = parse_key_values(text);
    for (const auto& o : overrides) apply_override(entries, o);
    return resolve_config(entries);
}

/// Fully resolved config text; parse_config(echo(c)) reproduces c.
inline std::string echo(const ConfigFile& c, bool include_out_dir = true) {
    std::ostringstream os;
    os << "dims = " << c.dims << '\n';
    os << "J = " << c.J << '\n';
    os << "L = " << text::format_real(c.L) << '\n';
    os << "delta = " << text::format_real(c.delta) << '\n';
    os << "tau = " << text::format_real(c.tau) << '\n';
    os << "T = " << text::format_real(c.T) << '\n';
    os << "safety = " << text::format_real(c.safety) << '\n';
    os << "diag_every = " << c.diag_every << '\n';
    os << "snapshot_times = ";
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
        os << (i ? "," : "") << text::format_real(c.snapshot_times[i]);
    }
    os << '\n';
    os << "ic = " << to_string(c.ic) << '\n';
    if (c.seed) os << "seed = " << *c.seed << '\n';
    os << "rng = " << c.rng << '\n';
    if (include_out_dir) os << "out_dir = " << c.out_dir << '\n';
    return os.str();
}

/// FNV-1a of the echo without out_dir; names per-run output subdirectories.
inline std::uint64_t config_hash(const ConfigFile& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : echo(c, false)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline Grid grid_of(const ConfigFile& c) { return Grid(c.dims, c.J, c.L); }

inline RunConfig run_config_of(const ConfigFile& c) {
    RunConfig rc;
    rc.delta = c.delta;
    rc.tau = c.tau;
    rc.T = c.T;
    rc.safety = c.safety;
    rc.diag_every = c.diag_every;
    rc.snapshot_times = c.snapshot_times;
    return rc;
}

inline Field build_initial_condition(const ConfigFile& c, const Grid& grid) {
    if (c.ic == InitialKind::UniformRandom && !c.seed) throw ConfigError("key 'seed' is required when ic = uniform-random");
    return initial_condition(c.ic, grid, c.seed.value_or(0));
}

}  // namespace feos
