#ifndef SEIQR_CONFIG_HPP
#define SEIQR_CONFIG_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "params.hpp"

namespace seiqr
{

namespace detail
{

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& value, const std::string& where)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": cannot parse '" + value + "' as a number");
    }
    if (pos != value.size()) {
        throw std::invalid_argument(where + ": trailing characters in '" + value + "'");
    }
    return v;
}

inline int parse_int(const std::string& value, const std::string& where)
{
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": cannot parse '" + value + "' as an integer");
    }
    if (pos != value.size()) {
        throw std::invalid_argument(where + ": trailing characters in '" + value + "'");
    }
    return v;
}

inline bool parse_bool(const std::string& value, const std::string& where)
{
    if (value == "0" || value == "false") return false;
    if (value == "1" || value == "true") return true;
    throw std::invalid_argument(where + ": expected 0/1/true/false, got '" + value + "'");
}

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lg", &back);
    for (int prec = 1; prec <= 16; ++prec) {
        char probe[32];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        std::sscanf(probe, "%lg", &back);
        if (back == v) return probe;
    }
    return buf;
}

} // namespace detail

/// Applies one "key = value" assignment to the scenario.  The section name
/// selects the target struct; unknown keys raise an error naming the key.
inline void apply_config_entry(ScenarioSpec& s, const std::string& section,
                               const std::string& key, const std::string& value)
{
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    const std::string where = "[" + section + "] " + key;

    if (section == "params") {
        ModelParams& p = s.params;
        if (key == "Lambda") p.Lambda = parse_double(value, where);
        else if (key == "beta1") p.beta1 = parse_double(value, where);
        else if (key == "beta2") p.beta2 = parse_double(value, where);
        else if (key == "mu") p.mu = parse_double(value, where);
        else if (key == "delta") p.delta = parse_double(value, where);
        else if (key == "gamma") p.gamma = parse_double(value, where);
        else if (key == "alpha") p.alpha = parse_double(value, where);
        else if (key == "rho") p.rho = parse_double(value, where);
        else if (key == "lambda_S") p.lambda_S = parse_double(value, where);
        else if (key == "lambda_E") p.lambda_E = parse_double(value, where);
        else if (key == "lambda_I") p.lambda_I = parse_double(value, where);
        else if (key == "lambda_Q") p.lambda_Q = parse_double(value, where);
        else if (key == "lambda_R") p.lambda_R = parse_double(value, where);
        else throw std::invalid_argument("unknown config key " + where);
    } else if (section == "weights") {
        CostWeights& w = s.weights;
        if (key == "kappa1") w.kappa1 = parse_double(value, where);
        else if (key == "kappa2") w.kappa2 = parse_double(value, where);
        else if (key == "kappa3") w.kappa3 = parse_double(value, where);
        else if (key == "kappa4") w.kappa4 = parse_double(value, where);
        else if (key == "w1") w.w1 = parse_double(value, where);
        else if (key == "w2") w.w2 = parse_double(value, where);
        else if (key == "w3") w.w3 = parse_double(value, where);
        else if (key == "sigma1") w.sigma1 = parse_double(value, where);
        else if (key == "sigma2") w.sigma2 = parse_double(value, where);
        else if (key == "sigma3") w.sigma3 = parse_double(value, where);
        else throw std::invalid_argument("unknown config key " + where);
    } else if (section == "grid") {
        Discretization& g = s.grid;
        if (key == "nx") g.nx = parse_int(value, where);
        else if (key == "ny") g.ny = parse_int(value, where);
        else if (key == "hx") g.hx = parse_double(value, where);
        else if (key == "hy") g.hy = parse_double(value, where);
        else if (key == "T") g.T = parse_double(value, where);
        else if (key == "dt") g.dt = parse_double(value, where);
        else throw std::invalid_argument("unknown config key " + where);
    } else if (section == "scenario") {
        InitialCondition& ic = s.ic;
        if (key == "case") {
            s.case_id = parse_int(value, where);
            s.active = case_mask(s.case_id);
        }
        else if (key == "active_u1") { s.active[0] = parse_bool(value, where); s.case_id = 0; }
        else if (key == "active_u2") { s.active[1] = parse_bool(value, where); s.case_id = 0; }
        else if (key == "active_u3") { s.active[2] = parse_bool(value, where); s.case_id = 0; }
        else if (key == "background_s") ic.background_s = parse_double(value, where);
        else if (key == "hotspot_ix") ic.hotspot_ix = parse_int(value, where);
        else if (key == "hotspot_iy") ic.hotspot_iy = parse_int(value, where);
        else if (key == "frac_s") ic.frac_s = parse_double(value, where);
        else if (key == "frac_e") ic.frac_e = parse_double(value, where);
        else if (key == "frac_i") ic.frac_i = parse_double(value, where);
        else throw std::invalid_argument("unknown config key " + where);
    } else if (section == "fbs") {
        FbsSettings& f = s.fbs;
        if (key == "max_iter") f.max_iter = parse_int(value, where);
        else if (key == "omega") f.omega = parse_double(value, where);
        else if (key == "tol_control") f.tol_control = parse_double(value, where);
        else if (key == "tol_cost") f.tol_cost = parse_double(value, where);
        else if (key == "sign") {
            if (value == "paper") f.sign = SignConvention::paper;
            else if (value == "duality") f.sign = SignConvention::duality;
            else throw std::invalid_argument(where + ": expected paper or duality");
        }
        else throw std::invalid_argument("unknown config key " + where);
    } else {
        throw std::invalid_argument("unknown config section [" + section + "]");
    }
}

/// Parses a scenario from INI-style text: [section] headers, "key = value"
/// lines, '#' comments.  Unset keys keep their defaults.  The result is
/// validated before it is returned.
inline ScenarioSpec load_config_stream(std::istream& in, const std::string& origin)
{
    ScenarioSpec s = default_paper_scenario(1);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument(
                    origin + ":" + std::to_string(lineno) + ": unterminated section header");
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(
                origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) {
            throw std::invalid_argument(
                origin + ":" + std::to_string(lineno) + ": key before any [section]");
        }
        try {
            apply_config_entry(s, section, key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(
                origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    s.validate();
    return s;
}

inline ScenarioSpec load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path);
    }
    return load_config_stream(in, path);
}

/// Canonical text form of a scenario.  Parsing the output reproduces the
/// scenario exactly; the manifest hashes this form.
inline std::string serialize_config(const ScenarioSpec& s)
{
    using detail::format_double;
    std::ostringstream out;
    out << "[params]\n";
    out << "Lambda = " << format_double(s.params.Lambda) << "\n";
    out << "beta1 = " << format_double(s.params.beta1) << "\n";
    out << "beta2 = " << format_double(s.params.beta2) << "\n";
    out << "mu = " << format_double(s.params.mu) << "\n";
    out << "delta = " << format_double(s.params.delta) << "\n";
    out << "gamma = " << format_double(s.params.gamma) << "\n";
    out << "alpha = " << format_double(s.params.alpha) << "\n";
    out << "rho = " << format_double(s.params.rho) << "\n";
    out << "lambda_S = " << format_double(s.params.lambda_S) << "\n";
    out << "lambda_E = " << format_double(s.params.lambda_E) << "\n";
    out << "lambda_I = " << format_double(s.params.lambda_I) << "\n";
    out << "lambda_Q = " << format_double(s.params.lambda_Q) << "\n";
    out << "lambda_R = " << format_double(s.params.lambda_R) << "\n";
    out << "[weights]\n";
    out << "kappa1 = " << format_double(s.weights.kappa1) << "\n";
    out << "kappa2 = " << format_double(s.weights.kappa2) << "\n";
    out << "kappa3 = " << format_double(s.weights.kappa3) << "\n";
    out << "kappa4 = " << format_double(s.weights.kappa4) << "\n";
    out << "w1 = " << format_double(s.weights.w1) << "\n";
    out << "w2 = " << format_double(s.weights.w2) << "\n";
    out << "w3 = " << format_double(s.weights.w3) << "\n";
    out << "sigma1 = " << format_double(s.weights.sigma1) << "\n";
    out << "sigma2 = " << format_double(s.weights.sigma2) << "\n";
    out << "sigma3 = " << format_double(s.weights.sigma3) << "\n";
    out << "[grid]\n";
    out << "nx = " << s.grid.nx << "\n";
    out << "ny = " << s.grid.ny << "\n";
    out << "hx = " << format_double(s.grid.hx) << "\n";
    out << "hy = " << format_double(s.grid.hy) << "\n";
    out << "T = " << format_double(s.grid.T) << "\n";
    out << "dt = " << format_double(s.grid.dt) << "\n";
    out << "[scenario]\n";
    if (s.case_id >= 1) {
        out << "case = " << s.case_id << "\n";
    } else {
        out << "active_u1 = " << (s.active[0] ? 1 : 0) << "\n";
        out << "active_u2 = " << (s.active[1] ? 1 : 0) << "\n";
        out << "active_u3 = " << (s.active[2] ? 1 : 0) << "\n";
    }
    out << "background_s = " << format_double(s.ic.background_s) << "\n";
    out << "hotspot_ix = " << s.ic.hotspot_ix << "\n";
    out << "hotspot_iy = " << s.ic.hotspot_iy << "\n";
    out << "frac_s = " << format_double(s.ic.frac_s) << "\n";
    out << "frac_e = " << format_double(s.ic.frac_e) << "\n";
    out << "frac_i = " << format_double(s.ic.frac_i) << "\n";
    out << "[fbs]\n";
    out << "max_iter = " << s.fbs.max_iter << "\n";
    out << "omega = " << format_double(s.fbs.omega) << "\n";
    out << "tol_control = " << format_double(s.fbs.tol_control) << "\n";
    out << "tol_cost = " << format_double(s.fbs.tol_cost) << "\n";
    out << "sign = " << to_string(s.fbs.sign) << "\n";
    return out.str();
}

/// FNV-1a 64 bit hash, used to fingerprint the canonical config text.
inline std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace seiqr

#endif
