#pragma once

#include <filesystem>

#include "fracmap/torus_field.hpp"

namespace fracmap {

/// Writes `<stem>.bin` (little-endian float64, row-major over sites then
/// components) and the sidecar `<stem>.json` {n, points_per_axis, length, components}.
void write_field(const std::filesystem::path& stem, const Field& f);

/// Reads a field written by write_field; `stem` may carry either extension or none.
Field read_field(const std::filesystem::path& stem);

/// One row per site: coordinates, then component values.
void write_field_csv(const std::filesystem::path& path, const Field& f);

}  // namespace fracmap
