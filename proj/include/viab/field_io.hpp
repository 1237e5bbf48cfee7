#pragma once

#include <filesystem>
#include <string>

#include "viab/grid.hpp"

namespace viab {

// On-disk field layout:
//   <stem>.bin   raw 64-bit little-endian IEEE doubles, row-major (last axis fastest)
//   <stem>.json  {"axes": [{"lower", "upper", "nodes"}, ...], "time_tag": t}

/// Writes <stem>.bin and <stem>.json; returns the two paths written.
std::pair<std::filesystem::path, std::filesystem::path> write_field(
    const ScalarField& field, const std::filesystem::path& stem);

/// Reads a field given either the stem, the .bin path or the .json path.
ScalarField read_field(const std::filesystem::path& path);

/// CSV with columns i0[,i1[,i2]],value; values printed with 17 significant digits.
void write_field_csv(const ScalarField& field, const std::filesystem::path& path);

/// 17-significant-digit round-trip formatting used by every CSV writer.
std::string format_real(double value);

}  // namespace viab
