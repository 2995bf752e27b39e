#include "kinreact/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "kinreact/errors.hpp"

namespace kinreact {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValues {
    std::string origin;
    std::map<std::string, std::pair<std::string, int>> entries; // key -> (value, line)
    mutable std::map<std::string, bool> used;

    const std::pair<std::string, int>* find(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        used[key] = true;
        return &it->second;
    }

    std::string require(const std::string& key) const {
        const auto* e = find(key);
        if (!e) throw ValidationError(origin + ": missing required key '" + key + "'");
        return e->first;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto* e = find(key);
        return e ? parse_double(key, *e) : fallback;
    }
    double require_double(const std::string& key) const {
        const auto* e = find(key);
        if (!e) throw ValidationError(origin + ": missing required key '" + key + "'");
        return parse_double(key, *e);
    }
    int get_int(const std::string& key, int fallback) const {
        const auto* e = find(key);
        return e ? parse_int(key, *e) : fallback;
    }
    int require_int(const std::string& key) const {
        const auto* e = find(key);
        if (!e) throw ValidationError(origin + ": missing required key '" + key + "'");
        return parse_int(key, *e);
    }
    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto* e = find(key);
        return e ? e->first : fallback;
    }
    bool get_bool(const std::string& key, bool fallback) const {
        const auto* e = find(key);
        if (!e) return fallback;
        if (e->first == "true" || e->first == "1") return true;
        if (e->first == "false" || e->first == "0") return false;
        throw ParseError(origin + ":" + std::to_string(e->second) + ": field '" + key +
                         "': expected true/false");
    }

    double parse_double(const std::string& key, const std::pair<std::string, int>& e) const {
        std::istringstream ss(e.first);
        double v;
        char c;
        if (!(ss >> v) || (ss >> c))
            throw ParseError(origin + ":" + std::to_string(e.second) + ": field '" + key +
                             "': not a number: '" + e.first + "'");
        return v;
    }
    int parse_int(const std::string& key, const std::pair<std::string, int>& e) const {
        std::istringstream ss(e.first);
        int v;
        char c;
        if (!(ss >> v) || (ss >> c))
            throw ParseError(origin + ":" + std::to_string(e.second) + ": field '" + key +
                             "': not an integer: '" + e.first + "'");
        return v;
    }
};

KeyValues read_key_values(std::istream& in, const std::string& origin) {
    KeyValues kv;
    kv.origin = origin;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(origin + ":" + std::to_string(line_no) + ": empty key or value");
        if (kv.entries.count(key))
            throw ParseError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                             "'");
        kv.entries[key] = {value, line_no};
    }
    return kv;
}

ProfileSpec read_profile(const KeyValues& kv, const std::string& section) {
    ProfileSpec spec;
    const std::string family = kv.get_string(section + ".family", "gaussian");
    if (family == "uniform")
        spec.family = ProfileSpec::Family::Uniform;
    else if (family == "gaussian")
        spec.family = ProfileSpec::Family::Gaussian;
    else if (family == "double-bump")
        spec.family = ProfileSpec::Family::DoubleBump;
    else if (family == "table")
        spec.family = ProfileSpec::Family::Table;
    else
        throw ValidationError(kv.origin + ": " + section + ".family: unknown family '" + family +
                              "'");
    spec.sigma = kv.get_double(section + ".sigma", 1.0);
    spec.v0 = kv.get_double(section + ".v0", 2.0);
    if (spec.family == ProfileSpec::Family::Table) {
        spec.table_path = kv.require(section + ".table");
        if (!std::filesystem::exists(spec.table_path))
            throw ValidationError(kv.origin + ": " + section + ".table: no such file: " +
                                  spec.table_path);
    }
    if (!(spec.sigma > 0.0))
        throw ValidationError(kv.origin + ": " + section + ".sigma must be positive");
    return spec;
}

} // namespace

RunConfig parse_config(std::istream& in, const std::string& origin) {
    const KeyValues kv = read_key_values(in, origin);
    RunConfig cfg;

    cfg.n_x = kv.require_int("mesh.n_x");
    cfg.torus_length = kv.get_double("mesh.torus_length", 1.0);
    cfg.n_v_half = kv.require_int("mesh.n_v_half");
    cfg.v_max = kv.require_double("mesh.v_max");
    if (cfg.n_x < 3 || cfg.n_x % 2 == 0)
        throw ValidationError(origin + ": mesh.n_x must be odd and >= 3");
    if (cfg.n_v_half < 1) throw ValidationError(origin + ": mesh.n_v_half must be >= 1");
    if (!(cfg.torus_length > 0.0))
        throw ValidationError(origin + ": mesh.torus_length must be positive");
    if (!(cfg.v_max > 0.0)) throw ValidationError(origin + ": mesh.v_max must be positive");

    cfg.profile1 = read_profile(kv, "profile1");
    cfg.profile2 = read_profile(kv, "profile2");

    const std::string family = kv.require("init.family");
    if (family == "equilibrium") {
        cfg.init_family = RunConfig::InitFamily::Equilibrium;
        cfg.init_rho_star = kv.get_double("init.rho_star", 1.0);
        if (!(cfg.init_rho_star > 0.0))
            throw ValidationError(origin + ": init.rho_star must be positive");
    } else if (family == "uniform-densities") {
        cfg.init_family = RunConfig::InitFamily::UniformDensities;
        cfg.init_rho_a = kv.require_double("init.rho_a");
        cfg.init_rho_b = kv.require_double("init.rho_b");
        if (!(cfg.init_rho_a > 0.0) || !(cfg.init_rho_b > 0.0))
            throw ValidationError(origin + ": init.rho_a and init.rho_b must be positive");
    } else if (family == "perturbed-equilibrium") {
        cfg.init_family = RunConfig::InitFamily::PerturbedEquilibrium;
        cfg.init_rho_star = kv.get_double("init.rho_star", 1.0);
        cfg.init_amplitude = kv.require_double("init.amplitude");
        cfg.init_mode = kv.get_int("init.mode", 1);
        if (!(cfg.init_rho_star > 0.0))
            throw ValidationError(origin + ": init.rho_star must be positive");
        if (!(std::abs(cfg.init_amplitude) < 1.0))
            throw ValidationError(origin + ": init.amplitude must satisfy |a| < 1");
        if (cfg.init_mode < 1) throw ValidationError(origin + ": init.mode must be >= 1");
    } else if (family == "table") {
        cfg.init_family = RunConfig::InitFamily::Table;
        cfg.init_table = kv.require("init.table");
        if (!std::filesystem::exists(cfg.init_table))
            throw ValidationError(origin + ": init.table: no such file: " + cfg.init_table);
    } else {
        throw ValidationError(origin + ": init.family: unknown family '" + family + "'");
    }

    cfg.rho_m = kv.require_double("bounds.rho_m");
    cfg.rho_M = kv.require_double("bounds.rho_M");
    if (!(cfg.rho_m > 0.0)) throw ValidationError(origin + ": bounds.rho_m must be positive");
    if (!(cfg.rho_m <= cfg.rho_M))
        throw ValidationError(origin + ": bounds must satisfy rho_m <= rho_M");

    cfg.dt = kv.require_double("time.dt");
    cfg.t_final = kv.require_double("time.t_final");
    if (!(cfg.dt > 0.0)) throw ValidationError(origin + ": time.dt must be positive");
    if (!(cfg.t_final > 0.0)) throw ValidationError(origin + ": time.t_final must be positive");

    cfg.picard_tol = kv.get_double("solver.picard_tol", 1e-12);
    cfg.picard_max_iter = kv.get_int("solver.picard_max_iter", 200);
    cfg.enforce_bounds = kv.get_bool("solver.enforce_bounds", true);
    if (!(cfg.picard_tol > 0.0))
        throw ValidationError(origin + ": solver.picard_tol must be positive");
    if (cfg.picard_max_iter < 1)
        throw ValidationError(origin + ": solver.picard_max_iter must be >= 1");

    cfg.delta = kv.get_double("diagnostics.delta", 0.0);
    cfg.stride = kv.get_int("diagnostics.stride", 1);
    cfg.fit_skip_fraction = kv.get_double("diagnostics.fit_skip_fraction", 0.2);
    if (cfg.delta < 0.0) throw ValidationError(origin + ": diagnostics.delta must be >= 0");
    if (cfg.stride < 1) throw ValidationError(origin + ": diagnostics.stride must be >= 1");
    if (cfg.fit_skip_fraction < 0.0 || cfg.fit_skip_fraction > 0.9)
        throw ValidationError(origin + ": diagnostics.fit_skip_fraction must be in [0, 0.9]");

    const std::string level = kv.get_string("check.level", "log");
    if (level == "off")
        cfg.check_level = RunConfig::CheckLevel::Off;
    else if (level == "log")
        cfg.check_level = RunConfig::CheckLevel::Log;
    else if (level == "fatal")
        cfg.check_level = RunConfig::CheckLevel::Fatal;
    else
        throw ValidationError(origin + ": check.level must be off, log or fatal");

    cfg.output_path = kv.get_string("output.path", "series.csv");
    const std::string format = kv.get_string("output.format", "csv");
    if (format == "csv")
        cfg.output_format = RunConfig::OutputFormat::Csv;
    else if (format == "jsonl")
        cfg.output_format = RunConfig::OutputFormat::Jsonl;
    else
        throw ValidationError(origin + ": output.format must be csv or jsonl");

    for (const auto& [key, value] : kv.entries)
        if (!kv.used[key])
            throw ValidationError(origin + ":" + std::to_string(value.second) + ": key '" + key +
                                  "' is not recognized for this configuration");

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    return parse_config(in, path);
}

} // namespace kinreact
