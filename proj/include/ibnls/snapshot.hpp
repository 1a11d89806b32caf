#pragma once
#include <string>

#include "ibnls/grid.hpp"

namespace ibnls {

// Binary field snapshot:
//   "IBNLS1" | u64 dim | u64 n_points | f64 half_width | u64 flags | u64 count | count × (f64 re, f64 im)
// all little-endian, values row-major. flags bit 0: spectral, bit 1: offset grid.
void write_snapshot(const std::string& path, const Field& f);
Field read_snapshot(const std::string& path);

}  // namespace ibnls
