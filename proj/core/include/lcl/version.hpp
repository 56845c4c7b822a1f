#pragma once

namespace lcl {

inline constexpr const char* kVersion = "0.1.0";

// Bumped when any on-disk format (checkpoint, manifest, config schema) changes.
inline constexpr unsigned kFormatVersion = 1;

}  // namespace lcl
