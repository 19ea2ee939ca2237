#pragma once

#include <string>

#include "pmlab/grid.hpp"

namespace pmlab {

// Binary snapshot format: 8-byte magic "PMLABFLD", u32 version, u32 dim,
// per-axis (f64 lo, f64 hi, u64 cells), f64 time stamp, u32 name length,
// name bytes, then the row-major payload of 64-bit little-endian floats.
// Round trips are bit-exact.
inline constexpr char kSnapshotMagic[8] = {'P', 'M', 'L', 'A',
                                           'B', 'F', 'L', 'D'};
inline constexpr uint32_t kSnapshotVersion = 1;

void write_snapshot(const Field& f, double time, const std::string& name,
                    const std::string& path);

struct LoadedSnapshot {
  Field field;
  double time = 0.0;
  std::string name;
};

LoadedSnapshot read_snapshot(const std::string& path);

}  // namespace pmlab
