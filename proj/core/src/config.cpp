#include "lcl/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lcl/forcing_basis.hpp"
#include "lcl/sha256.hpp"

namespace lcl {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoFailure("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_text(ss.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key");
        if (cfg.kv_.count(key))
            throw ConfigError(origin + ": duplicate key '" + key + "'");
        cfg.kv_[key] = val;
    }
    return cfg;
}

std::string Config::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end())
        throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double Config::get_double(const std::string& key) const {
    std::string v = get_string(key);
    try {
        std::size_t pos;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not a number: " + v);
    }
}

double Config::get_double(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
}

int Config::get_int(const std::string& key) const {
    double d = get_double(key);
    int i = int(std::llround(d));
    if (double(i) != d)
        throw ConfigError("config: key '" + key + "' is not an integer");
    return i;
}

int Config::get_int(const std::string& key, int dflt) const {
    return has(key) ? get_int(key) : dflt;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t dflt) const {
    if (!has(key)) return dflt;
    std::string v = get_string(key);
    try {
        std::size_t pos;
        unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not a u64: " + v);
    }
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: key '" + key + "' is not a boolean: " + v);
}

std::string Config::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
    return out;
}

std::string Config::fingerprint() const { return Sha256::of_string(canonical_text()); }

GridSpec Config::grid() const {
    GridSpec g;
    g.N = get_int("grid.N", 64);
    g.nu = get_double("grid.nu", 0.05);
    g.dealias_fraction = get_double("grid.dealias_fraction", 2.0 / 3.0);
    g.sobolev_index = get_int("grid.sobolev_index", 5);
    g.validate();
    return g;
}

NoiseParams Config::noise() const {
    NoiseParams p =
        NoiseParams::from_preset(get_string("noise.preset", "cosine-geometric(2)"));
    p.L = get_int("noise.L", 16);
    if (p.L < 1 || p.L > 64)
        throw ConfigError("config: noise.L must lie in [1, 64]");
    p.validate();
    return p;
}

double Config::dt() const {
    double dt = get_double("grid.dt", 1e-3);
    if (!(dt > 0)) throw ConfigError("config: grid.dt must be positive");
    int n = int(std::lround(1.0 / dt));
    if (n < 1 || std::abs(n * dt - 1.0) > 1e-9)
        throw ConfigError("config: grid.dt must divide the unit interval");
    return dt;
}

double Config::dt_ode() const { return get_double("lagrangian.dt", dt()); }

double Config::dt_max(const GridSpec& grid, const NoiseParams& noise) {
    double sup_e = 0.0;
    for (int j = 0; j < ForcingBasis::size(); ++j) {
        const ForcedMode& m = ForcingBasis::mode(j);
        sup_e += std::sqrt(m.j_sq) / m.norm_v5;  // |jperp| / ||E_j||_{V^5}
    }
    double sum_b = 0.0;
    for (int l = 1; l <= noise.L; ++l) sum_b += std::abs(noise.b(l));
    double envelope = sup_e * sum_b;
    double u_ref = std::max(1.0, 2.5 * std::sqrt(envelope / grid.nu));
    return std::min(0.05, 0.8 / (grid.cutoff() * u_ref));
}

void Config::validate_scenario(const std::string& scenario) const {
    if (has("scenario") && get_string("scenario") != scenario)
        throw ConfigError("config: key 'scenario' is '" + get_string("scenario") +
                          "' but the requested scenario is '" + scenario + "'");
    GridSpec g = grid();
    NoiseParams p = noise();
    double d = dt();
    double cap = dt_max(g, p);
    if (d > cap)
        throw ConfigError("config: key 'grid.dt' exceeds dt_max = " +
                          std::to_string(cap) + " for this grid and noise");
}

}  // namespace lcl
