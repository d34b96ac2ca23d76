#pragma once

#include <filesystem>

#include "fracflow/spectral.hpp"

namespace fracflow {

// "FHF1", u32 dim, u32 points per axis, f64 box length, then the row-major
// f64 values. Everything little-endian.
void write_fhf(const std::filesystem::path& path, const Field& f);
Field read_fhf(const std::filesystem::path& path);

}  // namespace fracflow
