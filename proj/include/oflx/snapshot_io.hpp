#pragma once

#include <string>

#include "oflx/field.hpp"

namespace oflx {

/// OFLX1 snapshot container: fixed little-endian header (magic, version,
/// grid, time, support tag) followed by the three component arrays as raw
/// IEEE doubles in C order. Round-trips are bit-exact. I/O failures raise
/// std::runtime_error; malformed contents raise std::invalid_argument.
void write_snapshot(const std::string& path, const VectorField& f);
VectorField read_snapshot(const std::string& path);

/// Hex SHA-256 of a file's bytes (reproducibility stamps in reports).
std::string file_sha256(const std::string& path);

}  // namespace oflx
