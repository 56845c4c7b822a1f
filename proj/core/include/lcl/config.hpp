#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lcl/grid.hpp"
#include "lcl/noise.hpp"

namespace lcl {

// Line-oriented configuration text: `key = value` with dotted keys for
// nesting, `#` comments.  Schema documented in docs/config.md (version 1).
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double dflt) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int dflt) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;

    // canonical text: sorted `key = value` lines
    std::string canonical_text() const;
    std::string fingerprint() const;  // sha256 of the canonical text

    const std::map<std::string, std::string>& entries() const { return kv_; }

    // assembled sub-objects
    GridSpec grid() const;
    NoiseParams noise() const;
    double dt() const;
    double dt_ode() const;  // defaults to dt

    // Documented stability ceiling for the advective CFL with the linear
    // part handled exactly: dt_max = min(0.05, 0.8 / (K u_ref)) with
    // u_ref = max(1, 2.5 sqrt(F/nu)) and F the sup amplitude of the noise
    // envelope.  Enforced at load time.
    static double dt_max(const GridSpec& grid, const NoiseParams& noise);
    void validate_scenario(const std::string& scenario) const;

  private:
    std::map<std::string, std::string> kv_;
    std::string origin_;
};

}  // namespace lcl
