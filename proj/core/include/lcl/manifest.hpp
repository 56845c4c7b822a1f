#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lcl {

struct ManifestEntry {
    std::string path;    // relative to the manifest directory
    std::string sha256;
};

// Reproducibility record of one scenario run: the full config text, the
// seed, the code version and a content hash per artifact.
struct Manifest {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string config_text;
    std::string config_sha256;
    std::string version;
    unsigned format = 1;
    unsigned threads = 1;
    double wall_seconds = 0.0;
    std::vector<ManifestEntry> outputs;

    void write(const std::string& path) const;
    static Manifest read(const std::string& path);
};

struct ReplayReport {
    enum class Status { Identical, DiffExpected, Diff };
    Status status = Status::Identical;
    struct Item {
        std::string path;
        std::string reason;  // "original-modified" or "replay-differs"
    };
    std::vector<Item> differing;
};

}  // namespace lcl
