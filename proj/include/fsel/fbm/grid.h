#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fsel {

/// Uniform time grid t0 + k dt, k = 0..n.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(double t0, double dt, std::size_t n);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps() const noexcept { return n_; }
  std::size_t nodes() const noexcept { return n_ + 1; }
  double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
  double end() const noexcept { return time(n_); }

  /// Index of the node within `rel_tol * dt` of t, if any.
  std::optional<std::size_t> index_of(double t, double rel_tol = 1e-9) const noexcept;
  /// Like index_of but throws DomainError naming `what` when t is off-grid.
  std::size_t require_index(double t, const char* what) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t0_ = 0.0;
  double dt_ = 1.0;
  std::size_t n_ = 1;
};

/// Values on the nodes of a TimeGrid. All values are finite.
class Path {
 public:
  Path(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double time(std::size_t k) const noexcept { return grid_.time(k); }

  /// Moves the values out, leaving the path empty.
  std::vector<double> release() && { return std::move(values_); }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

/// Sub-path on nodes [first, last] with the matching sub-grid.
Path slice(const Path& path, std::size_t first, std::size_t last);

}  // namespace fsel
