#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "fsel/fbm/grid.h"

namespace fsel {

/// CSV with header "t,value", one node per line, values printed with 17
/// significant digits so they read back exactly.
void write_path_csv(std::ostream& out, const Path& path);
Path read_path_csv(std::istream& in);

/// Binary column format, little-endian:
///   "FSEL" | u32 version | u64 n (steps) | f64 dt | f64 t0 | (n+1) x f64 values
inline constexpr std::uint32_t kPathFormatVersion = 1;
void write_path_binary(std::ostream& out, const Path& path);
Path read_path_binary(std::istream& in);

void save_path_binary(const std::filesystem::path& file, const Path& path);
Path load_path_binary(const std::filesystem::path& file);

}  // namespace fsel
