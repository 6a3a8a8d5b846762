#include "fsel/fbm/path_io.h"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fsel/common/error.h"

namespace fsel {
namespace {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("path file truncated");
  return to_little(v);
}

}  // namespace

void write_path_csv(std::ostream& out, const Path& path) {
  out << "t,value\n";
  char buf[64];
  for (std::size_t k = 0; k < path.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.time(k), path[k]);
    out << buf;
  }
}

Path read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,value") throw std::runtime_error("path CSV: missing 't,value' header");
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("path CSV: malformed line '" + line + "'");
    t.push_back(std::stod(line.substr(0, comma)));
    v.push_back(std::stod(line.substr(comma + 1)));
  }
  if (t.size() < 2) throw std::runtime_error("path CSV: need at least two nodes");
  const std::size_t n = t.size() - 1;
  const double dt = (t.back() - t.front()) / static_cast<double>(n);
  const TimeGrid grid(t.front(), dt, n);
  for (std::size_t k = 0; k <= n; ++k)
    if (std::abs(t[k] - grid.time(k)) > 1e-9 * dt + 1e-12 * std::abs(t[k]))
      throw DomainError("path CSV: time column is not a uniform grid");
  return Path(grid, std::move(v));
}

void write_path_binary(std::ostream& out, const Path& path) {
  out.write("FSEL", 4);
  put<std::uint32_t>(out, kPathFormatVersion);
  put<std::uint64_t>(out, path.grid().steps());
  put<double>(out, path.grid().dt());
  put<double>(out, path.grid().t0());
  for (double x : path.values()) put<double>(out, x);
}

Path read_path_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "FSEL", 4) != 0) throw std::runtime_error("path file: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kPathFormatVersion)
    throw std::runtime_error("path file: unsupported version " + std::to_string(version));
  const auto n = get<std::uint64_t>(in);
  const double dt = get<double>(in);
  const double t0 = get<double>(in);
  std::vector<double> v(n + 1);
  for (auto& x : v) x = get<double>(in);
  return Path(TimeGrid(t0, dt, n), std::move(v));
}

void save_path_binary(const std::filesystem::path& file, const Path& path) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  write_path_binary(out, path);
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

Path load_path_binary(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return read_path_binary(in);
}

}  // namespace fsel
