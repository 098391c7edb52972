#pragma once

#include <string>

#include "mnls/evolution.hpp"

namespace mnls {

// Binary field snapshot, little-endian:
//   uint32 dim, uint32 n, uint32 M, float64 t,
//   then for each component, for each grid point (row-major): float64 re, float64 im.
// The box length is not stored; the reader takes it from the caller.

void write_snapshot(const std::string& path, const FieldState& state);
FieldState read_snapshot(const std::string& path, double length);

}  // namespace mnls
