#include "fsel/fbm/grid.h"

#include <cmath>
#include <string>

#include "fsel/common/error.h"

namespace fsel {

TimeGrid::TimeGrid(double t0, double dt, std::size_t n) : t0_(t0), dt_(dt), n_(n) {
  if (!std::isfinite(t0)) throw DomainError("TimeGrid: t0 must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("TimeGrid: dt must be > 0");
  if (n < 1) throw DomainError("TimeGrid: need at least one step");
}

std::optional<std::size_t> TimeGrid::index_of(double t, double rel_tol) const noexcept {
  const double k = std::round((t - t0_) / dt_);
  if (k < 0.0 || k > static_cast<double>(n_)) return std::nullopt;
  if (std::abs(t - (t0_ + k * dt_)) > rel_tol * dt_) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::size_t TimeGrid::require_index(double t, const char* what) const {
  if (auto k = index_of(t)) return *k;
  throw DomainError(std::string(what) + " = " + std::to_string(t) + " is not a grid node");
}

Path::Path(TimeGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nodes())
    throw DomainError("Path: value count " + std::to_string(values_.size()) +
                      " does not match grid node count " + std::to_string(grid_.nodes()));
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k]))
      throw NumericError("Path: non-finite value at node " + std::to_string(k));
}

Path slice(const Path& path, std::size_t first, std::size_t last) {
  if (first >= last || last >= path.size()) throw DomainError("slice: need first < last < size");
  const auto v = path.values();
  return Path(TimeGrid(path.time(first), path.grid().dt(), last - first),
              std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(first),
                                  v.begin() + static_cast<std::ptrdiff_t>(last) + 1));
}

}  // namespace fsel
