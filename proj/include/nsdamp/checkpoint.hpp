#pragma once

#include <iosfwd>
#include <string>

#include "nsdamp/integrator.hpp"

namespace nsdamp {

/// Binary checkpoint, little-endian host layout:
///   magic "NSDCKPT\0", u32 version, i32 dim, i32 n, f64 box_length,
///   f64 t, f64 dt, i64 step_count, u8 divergence_free, u64 coefficient count,
///   coefficients as (re, im) f64 pairs, u32 CRC-32 of everything before it.
inline constexpr std::uint32_t checkpoint_version = 1;

void checkpoint_save(const SolverState& state, std::ostream& sink);
/// Throws CheckpointError on bad magic, version mismatch, truncation or checksum failure.
SolverState checkpoint_load(std::istream& source);

/// Writes through a temporary file and renames it into place.
void checkpoint_save_file(const SolverState& state, const std::string& path);
SolverState checkpoint_load_file(const std::string& path);

}  // namespace nsdamp
