#pragma once

#include <cstdint>
#include <string>

#include "sllg/integrator.hpp"

namespace sllg {

/// Field snapshot file, all values little-endian:
///   bytes 0..4   magic "SLLG1"
///   u64 nx, u64 ny, f64 lx, f64 ly, u64 ncomp
///   ncomp planes of ny*nx f64, row-major within a plane (x fastest).
void write_snapshot(const std::string& path, const Field& f);
Field read_snapshot(const std::string& path);

/// Checkpoint file: magic "SLLGCK1", f64 t, f64 dt, u64 step counter,
/// u64 config hash, then the s and m snapshots inline (same layout as above,
/// magic included).
struct Checkpoint {
  State state;
  double dt = 0.0;
  std::uint64_t step = 0;
  std::uint64_t config_hash = 0;
};
void write_checkpoint(const std::string& path, const Checkpoint& ck);
/// expected_hash != 0 enforces a config match.
Checkpoint read_checkpoint(const std::string& path, std::uint64_t expected_hash = 0);

/// FNV-1a, used for config hashes.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace sllg
