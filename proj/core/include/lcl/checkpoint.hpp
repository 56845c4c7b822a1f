#pragma once

#include <string>

#include "lcl/field.hpp"

namespace lcl {

// Binary velocity checkpoint, little-endian:
//   magic "LCL1" | u32 format version | u32 N | f64 nu | u32 count
//   count records of (i32 k1, i32 k2, f64 re1, f64 im1, f64 re2, f64 im2)
// listing the canonical retained modes; conjugate partners are implied.
void write_checkpoint(const std::string& path, const VelocityField& u);
VelocityField read_checkpoint(const std::string& path);

}  // namespace lcl
