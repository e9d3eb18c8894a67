#pragma once

// Flat key-value configuration files. One `key = values...` assignment per
// line, `#` comments, dotted section prefixes (chain., bath., quad., md.,
// fk., eff.). Arrays are space separated; per-bead lists accept a single
// value as shorthand for a uniform list. Unknown keys are rejected.
//
//   chain.n = 5
//   chain.springs = 2 2 1 1 0.1 0.1
//   bath.frictions = 1 1 0 1 1
//   bath.temperatures = 1 0.5 0 0.2 0.1
//   bath.hot = 1 2
//   bath.cold = 4 5
//   quad.omega_max = auto

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tgho/chain.hpp"
#include "tgho/md.hpp"

namespace tgho {

struct SimulationConfig {
    ChainSpec chain;
    BathSpec baths;
    QuadratureSpec quad;
    bool quad_auto = true;   ///< omega_max derived from the chain
    MDConfig md;
    std::optional<FKPotentialSpec> fk;
    std::optional<double> eff_slope;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_numbers(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    std::string rest;
    if (!(in.eof()) || out.empty()) {
        in.clear();
        in >> rest;
        throw ConfigError("key '" + key + "': cannot parse '" + text + "' as numbers");
    }
    return out;
}

inline std::vector<int> parse_ints(const std::string& key, const std::string& text) {
    auto nums = parse_numbers(key, text);
    std::vector<int> out;
    for (double x : nums) {
        const int i = static_cast<int>(x);
        if (static_cast<double>(i) != x)
            throw ConfigError("key '" + key + "': expected integers, got '" + text + "'");
        out.push_back(i);
    }
    return out;
}

inline std::vector<double> broadcast(const std::string& key, std::vector<double> v, size_t n) {
    if (v.size() == 1 && n > 1) v.assign(n, v[0]);
    if (v.size() != n)
        throw ConfigError("key '" + key + "': expected " + std::to_string(n) +
                          " values, got " + std::to_string(v.size()));
    return v;
}

} // namespace detail

inline SimulationConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("duplicate key '" + key + "'");
        kv[key] = val;
    }

    static const std::vector<std::string> known = {
        "chain.n",        "chain.masses",     "chain.springs", "chain.pinning",
        "chain.spacing",  "bath.frictions",   "bath.temperatures", "bath.hot",
        "bath.cold",      "quad.omega_max",   "quad.points",   "quad.scheme",
        "md.dt",          "md.equilibration_steps", "md.production_steps",
        "md.realizations", "md.base_seed",    "md.measure_bond", "md.stationarity_windows",
        "fk.amplitudes",  "fk.period",        "fk.phase",      "eff.slope"};
    std::vector<std::string> unknown;
    for (const auto& [k, v] : kv)
        if (std::find(known.begin(), known.end(), k) == known.end()) unknown.push_back(k);
    if (!unknown.empty()) {
        std::string msg = "unknown configuration key(s):";
        for (const auto& k : unknown) msg += " '" + k + "'";
        throw ConfigError(msg);
    }

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const std::string& key) -> std::string {
        auto v = get(key);
        if (!v) throw ConfigError("missing required key '" + key + "'");
        return *v;
    };
    auto number = [&](const std::string& key, const std::string& text) {
        auto v = detail::parse_numbers(key, text);
        if (v.size() != 1) throw ConfigError("key '" + key + "': expected a single number");
        return v[0];
    };

    SimulationConfig cfg;
    const auto n_values = detail::parse_ints("chain.n", require("chain.n"));
    if (n_values.size() != 1 || n_values[0] < 1)
        throw ConfigError("chain.n must be a single positive integer");
    const int n = n_values[0];
    const auto un = static_cast<size_t>(n);
    cfg.chain.n = n;
    cfg.chain.masses =
        get("chain.masses")
            ? detail::broadcast("chain.masses",
                                detail::parse_numbers("chain.masses", *get("chain.masses")), un)
            : std::vector<double>(un, 1.0);
    cfg.chain.springs = detail::broadcast(
        "chain.springs", detail::parse_numbers("chain.springs", require("chain.springs")),
        un + 1);
    cfg.chain.pinning =
        get("chain.pinning")
            ? detail::broadcast("chain.pinning",
                                detail::parse_numbers("chain.pinning", *get("chain.pinning")), un)
            : std::vector<double>(un, 0.0);
    if (auto v = get("chain.spacing")) cfg.chain.spacing = number("chain.spacing", *v);

    cfg.baths.frictions = detail::broadcast(
        "bath.frictions", detail::parse_numbers("bath.frictions", require("bath.frictions")), un);
    cfg.baths.temperatures = detail::broadcast(
        "bath.temperatures",
        detail::parse_numbers("bath.temperatures", require("bath.temperatures")), un);
    cfg.baths.hot_set = detail::parse_ints("bath.hot", require("bath.hot"));
    cfg.baths.cold_set = detail::parse_ints("bath.cold", require("bath.cold"));

    if (auto v = get("quad.omega_max")) {
        if (*v == "auto") {
            cfg.quad_auto = true;
        } else {
            cfg.quad.omega_max = number("quad.omega_max", *v);
            cfg.quad_auto = false;
        }
    }
    if (auto v = get("quad.points")) {
        cfg.quad.points = static_cast<int>(number("quad.points", *v));
        if (cfg.quad.points < 2) throw ConfigError("quad.points must be at least 2");
    }
    if (auto v = get("quad.scheme")) {
        if (*v == "trapezoid")
            cfg.quad.scheme = QuadratureSpec::Scheme::trapezoid;
        else if (*v == "adaptive")
            cfg.quad.scheme = QuadratureSpec::Scheme::adaptive;
        else
            throw ConfigError("quad.scheme must be 'trapezoid' or 'adaptive'");
    }

    if (auto v = get("md.dt")) cfg.md.dt = number("md.dt", *v);
    if (auto v = get("md.equilibration_steps"))
        cfg.md.equilibration_steps = static_cast<long long>(number("md.equilibration_steps", *v));
    if (auto v = get("md.production_steps"))
        cfg.md.production_steps = static_cast<long long>(number("md.production_steps", *v));
    if (auto v = get("md.realizations"))
        cfg.md.realizations = static_cast<int>(number("md.realizations", *v));
    if (auto v = get("md.base_seed"))
        cfg.md.base_seed = static_cast<std::uint64_t>(number("md.base_seed", *v));
    if (auto v = get("md.measure_bond")) {
        const auto b = detail::parse_ints("md.measure_bond", *v);
        if (b.size() == 1)
            cfg.md.measure_bond = {b[0], b[0] + 1};
        else if (b.size() == 2 && b[1] == b[0] + 1)
            cfg.md.measure_bond = {b[0], b[1]};
        else
            throw ConfigError("md.measure_bond must be 'i' or 'i i+1'");
    }
    if (auto v = get("md.stationarity_windows"))
        cfg.md.stationarity_windows = static_cast<int>(number("md.stationarity_windows", *v));

    if (get("fk.amplitudes")) {
        FKPotentialSpec fk;
        fk.amplitudes = detail::broadcast(
            "fk.amplitudes", detail::parse_numbers("fk.amplitudes", *get("fk.amplitudes")), un);
        fk.period = cfg.chain.spacing;
        if (auto v = get("fk.period")) fk.period = number("fk.period", *v);
        if (auto v = get("fk.phase")) fk.phase = number("fk.phase", *v);
        cfg.fk = fk;
    } else if (get("fk.period") || get("fk.phase")) {
        throw ConfigError("fk.period/fk.phase need fk.amplitudes");
    }
    if (auto v = get("eff.slope")) cfg.eff_slope = number("eff.slope", *v);
    return cfg;
}

inline SimulationConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Canonical serialization and hashing (provenance)

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline void emit(std::ostringstream& out, const std::string& key,
                 const std::vector<double>& values) {
    out << key << " =";
    for (double v : values) out << ' ' << format_g17(v);
    out << '\n';
}

} // namespace detail

/// Deterministic text form of a configuration; the config hash is FNV-1a
/// over exactly this string.
inline std::string canonical_config_text(const SimulationConfig& cfg) {
    std::ostringstream out;
    out << "chain.n = " << cfg.chain.n << '\n';
    detail::emit(out, "chain.masses", cfg.chain.masses);
    detail::emit(out, "chain.springs", cfg.chain.springs);
    detail::emit(out, "chain.pinning", cfg.chain.pinning);
    out << "chain.spacing = " << format_g17(cfg.chain.spacing) << '\n';
    detail::emit(out, "bath.frictions", cfg.baths.frictions);
    detail::emit(out, "bath.temperatures", cfg.baths.temperatures);
    out << "bath.hot =";
    for (int b : cfg.baths.hot_set) out << ' ' << b;
    out << "\nbath.cold =";
    for (int b : cfg.baths.cold_set) out << ' ' << b;
    out << '\n';
    if (cfg.quad_auto)
        out << "quad.omega_max = auto\n";
    else
        out << "quad.omega_max = " << format_g17(cfg.quad.omega_max) << '\n';
    out << "quad.points = " << cfg.quad.points << '\n';
    out << "quad.scheme = "
        << (cfg.quad.scheme == QuadratureSpec::Scheme::trapezoid ? "trapezoid" : "adaptive")
        << '\n';
    out << "md.dt = " << format_g17(cfg.md.dt) << '\n';
    out << "md.equilibration_steps = " << cfg.md.equilibration_steps << '\n';
    out << "md.production_steps = " << cfg.md.production_steps << '\n';
    out << "md.realizations = " << cfg.md.realizations << '\n';
    out << "md.base_seed = " << cfg.md.base_seed << '\n';
    out << "md.measure_bond = " << cfg.md.measure_bond.first << ' '
        << cfg.md.measure_bond.second << '\n';
    if (cfg.fk) {
        detail::emit(out, "fk.amplitudes", cfg.fk->amplitudes);
        out << "fk.period = " << format_g17(cfg.fk->period) << '\n';
        out << "fk.phase = " << format_g17(cfg.fk->phase) << '\n';
    }
    if (cfg.eff_slope) out << "eff.slope = " << format_g17(*cfg.eff_slope) << '\n';
    return out.str();
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string config_hash(const SimulationConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config_text(cfg))));
    return buf;
}

inline std::string text_hash(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

} // namespace tgho
