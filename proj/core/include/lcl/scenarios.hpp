#pragma once

#include <optional>

#include "lcl/config.hpp"
#include "lcl/manifest.hpp"

namespace lcl {

// Known scenario names: simulate, lyapunov, steer, mixing, gramian, saturate.
bool is_scenario(const std::string& name);

// Runs a scenario, writing its artifacts under out_dir.  Returns the
// artifact paths relative to out_dir (manifest excluded).
std::vector<std::string> run_scenario(const std::string& scenario,
                                      const Config& cfg,
                                      const std::string& out_dir,
                                      std::uint64_t seed);

// run_scenario plus the manifest (out_dir/manifest.json).
Manifest run_with_manifest(const std::string& scenario, const Config& cfg,
                           const std::string& out_dir, std::uint64_t seed);

// Re-runs the manifest's scenario into work_dir (default
// <manifest dir>/replay) and byte-compares artifacts against both the
// manifest hashes and the files currently on disk.
ReplayReport replay_manifest(const std::string& manifest_path,
                             const std::string& work_dir = "",
                             std::optional<std::uint64_t> seed_override = {});

}  // namespace lcl
