#pragma once

// Flat key-value experiment configuration with dotted section names.
//
// The format is plain text, one `key = value` per line, '#' comments; there
// is exactly one canonical renderer and parse(render(config)) == config.
// Unknown keys are rejected with the offending key path.  Doubles render in
// shortest round-trip form.

#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gfc/errors.hpp"

namespace gfc {

inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

struct ExperimentConfig {
    std::string group = "torus1";
    int resolution = 256;
    std::uint64_t seed = 12345;
    std::string output_dir = "out";

    std::string operator_preset = "shifted_power";
    double operator_m = 2.0;
    double operator_c = 1.0;
    double operator_eta = 0.0;
    std::uint64_t operator_seed = 0; // 0: derive from the global seed

    std::string omega_kind = "arcs"; // full | arcs | ball
    std::string omega_arcs = "0,0.3";
    std::string omega_center = "0,0,0";
    double omega_radius = 0.5;

    std::string lambda_grid = "3.2,6.5,9.7,13,16.2,19.5,22.7,26";
    double lambda_cut = 19.0;
    double dual_bracket_cut = 151.0;

    double time_T = 1.0;
    std::string time_T_grid = "0.8,0.4,0.2,0.1,0.05";
    double time_alpha = 1.0;

    double contour_epsilon = 1e-4;
    double contour_ray_length = 0.0; // 0: auto from the exponent's tail bound
    int contour_nodes = 24;

    double doubling_radius = 0.1;
    int doubling_trials = 8;
    int doubling_ascent_steps = 40;

    std::string control_u0 = "uniform";
    double control_tol = 1e-8;
    double control_regularization = 0.0;

    std::string cutoff_eps_grid = "0.1,0.3,0.5,0.7,0.9";

    std::string symbol_name = "bracket_m"; // bracket_m | oscillation | mixed
    double symbol_rho = 1.0;
    double symbol_delta = 0.0;
    double symbol_m = 2.0;
    int symbol_max_order = 2;
    long symbol_k_trunc = 256;

    std::string power_exponents = "-1,-0.5";

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

struct ConfigField {
    std::string key;
    std::string (*get)(const ExperimentConfig&);
    void (*set)(ExperimentConfig&, const std::string&);
};

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
    return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as an integer");
    return out;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as an unsigned integer");
    return out;
}

#define GFC_CFG_STR(KEY, FIELD)                                               \
    ConfigField{KEY, [](const ExperimentConfig& c) { return c.FIELD; },       \
                [](ExperimentConfig& c, const std::string& v) { c.FIELD = v; }}
#define GFC_CFG_DBL(KEY, FIELD)                                               \
    ConfigField{KEY, [](const ExperimentConfig& c) { return fmt_double(c.FIELD); }, \
                [](ExperimentConfig& c, const std::string& v) { c.FIELD = parse_double(KEY, v); }}
#define GFC_CFG_INT(KEY, FIELD)                                               \
    ConfigField{KEY, [](const ExperimentConfig& c) { return std::to_string(c.FIELD); }, \
                [](ExperimentConfig& c, const std::string& v) {               \
                    c.FIELD = static_cast<decltype(c.FIELD)>(parse_int(KEY, v)); }}
#define GFC_CFG_U64(KEY, FIELD)                                               \
    ConfigField{KEY, [](const ExperimentConfig& c) { return fmt_u64(c.FIELD); }, \
                [](ExperimentConfig& c, const std::string& v) { c.FIELD = parse_u64(KEY, v); }}

inline const std::vector<ConfigField>& config_schema() {
    static const std::vector<ConfigField> schema = {
        GFC_CFG_STR("group", group),
        GFC_CFG_INT("resolution", resolution),
        GFC_CFG_U64("seed", seed),
        GFC_CFG_STR("output.dir", output_dir),
        GFC_CFG_STR("operator.preset", operator_preset),
        GFC_CFG_DBL("operator.m", operator_m),
        GFC_CFG_DBL("operator.c", operator_c),
        GFC_CFG_DBL("operator.eta", operator_eta),
        GFC_CFG_U64("operator.seed", operator_seed),
        GFC_CFG_STR("omega.kind", omega_kind),
        GFC_CFG_STR("omega.arcs", omega_arcs),
        GFC_CFG_STR("omega.center", omega_center),
        GFC_CFG_DBL("omega.radius", omega_radius),
        GFC_CFG_STR("lambda.grid", lambda_grid),
        GFC_CFG_DBL("lambda.cut", lambda_cut),
        GFC_CFG_DBL("dual.bracket_cut", dual_bracket_cut),
        GFC_CFG_DBL("time.T", time_T),
        GFC_CFG_STR("time.T_grid", time_T_grid),
        GFC_CFG_DBL("time.alpha", time_alpha),
        GFC_CFG_DBL("contour.epsilon", contour_epsilon),
        GFC_CFG_DBL("contour.ray_length", contour_ray_length),
        GFC_CFG_INT("contour.nodes", contour_nodes),
        GFC_CFG_DBL("doubling.radius", doubling_radius),
        GFC_CFG_INT("doubling.trials", doubling_trials),
        GFC_CFG_INT("doubling.ascent_steps", doubling_ascent_steps),
        GFC_CFG_STR("control.u0", control_u0),
        GFC_CFG_DBL("control.tol", control_tol),
        GFC_CFG_DBL("control.regularization", control_regularization),
        GFC_CFG_STR("cutoff.eps_grid", cutoff_eps_grid),
        GFC_CFG_STR("symbol.name", symbol_name),
        GFC_CFG_DBL("symbol.rho", symbol_rho),
        GFC_CFG_DBL("symbol.delta", symbol_delta),
        GFC_CFG_DBL("symbol.m", symbol_m),
        GFC_CFG_INT("symbol.max_order", symbol_max_order),
        GFC_CFG_INT("symbol.k_trunc", symbol_k_trunc),
        GFC_CFG_STR("power.exponents", power_exponents),
    };
    return schema;
}

#undef GFC_CFG_STR
#undef GFC_CFG_DBL
#undef GFC_CFG_INT
#undef GFC_CFG_U64

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace detail

inline std::string render_config(const ExperimentConfig& c) {
    std::string out;
    for (const auto& f : detail::config_schema()) {
        out += f.key;
        out += " = ";
        out += f.get(c);
        out += "\n";
    }
    return out;
}

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string val = detail::trim(t.substr(eq + 1));
        bool found = false;
        for (const auto& f : detail::config_schema())
            if (f.key == key) {
                f.set(c, val);
                found = true;
                break;
            }
        if (!found) throw ConfigError("unknown config key '" + key + "'");
    }
    return c;
}

// comma-separated doubles, e.g. lambda grids and T grids
inline std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        const std::string t = detail::trim(cur);
        if (t.empty()) continue;
        out.push_back(detail::parse_double(key, t));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

} // namespace gfc
