#include "fsel/fbm/norms.h"

#include <algorithm>
#include <cmath>

#include "fsel/common/error.h"

namespace fsel {

double norm_L(const Path& brownian, double U, double T, double delta) {
  if (!(U < T)) throw DomainError("norm_L: need U < T");
  const auto& g = brownian.grid();
  const std::size_t iu = g.require_index(U, "norm_L: U");
  const std::size_t it = g.require_index(T, "norm_L: T");
  const auto b = brownian.values();
  double best = 0.0;
  for (std::size_t k = iu; k < it; ++k) {
    const double lag = static_cast<double>(it - k) * g.dt();
    best = std::max(best, std::abs(b[k] - b[it]) / std::pow(1.0 + lag, 0.5 + delta));
  }
  return best;
}

double norm_S(const Path& brownian, double T, double delta) {
  const auto& g = brownian.grid();
  const auto it = g.index_of(T);
  const auto i0 = g.index_of(T - 1.0);
  if (!it || !i0) throw DomainError("norm_S: [T-1, T] is not covered by the grid");
  const auto b = brownian.values();
  double best = 0.0;
  for (std::size_t k = *i0; k < *it; ++k) {
    const double lag = static_cast<double>(*it - k) * g.dt();
    best = std::max(best, std::abs(b[k] - b[*it]) / std::pow(lag, 0.5 - delta));
  }
  return best;
}

double norm_M(const Path& brownian, double a, double b, double delta) {
  if (!(a < b)) throw DomainError("norm_M: need a < b");
  const auto& g = brownian.grid();
  const std::size_t ia = g.require_index(a, "norm_M: a");
  const std::size_t ib = g.require_index(b, "norm_M: b");
  return std::pow(b - a, -delta) * holder_seminorm(brownian, ia, ib, 0.5 - delta);
}

double holder_seminorm(const Path& path, std::size_t first, std::size_t last, double exponent,
                       double stop_above) {
  if (first >= last || last >= path.size()) throw DomainError("holder_seminorm: need first < last < size");
  if (!(exponent > 0.0)) throw DomainError("holder_seminorm: exponent must be > 0");
  const auto x = path.values();
  const double dt = path.grid().dt();
  constexpr std::size_t kBlock = 32;

  // Node lags in step units: (m dt)^-exponent for m = 0..last-first.
  const std::size_t span = last - first;
  std::vector<double> inv_lag(span + 1);
  inv_lag[0] = 0.0;
  for (std::size_t m = 1; m <= span; ++m) inv_lag[m] = std::pow(static_cast<double>(m) * dt, -exponent);

  // Per-block extrema of x over nodes [first + j*kBlock, first + (j+1)*kBlock).
  const std::size_t nblocks = (span + 1 + kBlock - 1) / kBlock;
  std::vector<double> bmin(nblocks), bmax(nblocks);
  for (std::size_t j = 0; j < nblocks; ++j) {
    const std::size_t lo = first + j * kBlock;
    const std::size_t hi = std::min(last + 1, lo + kBlock);
    const auto [mn, mx] = std::minmax_element(x.begin() + static_cast<std::ptrdiff_t>(lo),
                                              x.begin() + static_cast<std::ptrdiff_t>(hi));
    bmin[j] = *mn;
    bmax[j] = *mx;
  }

  double best = 0.0;
  for (std::size_t u = first; u < last; ++u) {
    const double xu = x[u];
    const std::size_t ju = (u - first) / kBlock;
    // Rest of u's own block, scanned directly.
    const std::size_t own_end = std::min(last, first + (ju + 1) * kBlock - 1);
    for (std::size_t v = u + 1; v <= own_end; ++v) best = std::max(best, std::abs(x[v] - xu) * inv_lag[v - u]);
    for (std::size_t j = ju + 1; j < nblocks; ++j) {
      const std::size_t lo = first + j * kBlock;
      const double reach = std::max(bmax[j] - xu, xu - bmin[j]);
      if (reach * inv_lag[lo - u] <= best) continue;
      const std::size_t hi = std::min(last, lo + kBlock - 1);
      for (std::size_t v = lo; v <= hi; ++v) best = std::max(best, std::abs(x[v] - xu) * inv_lag[v - u]);
    }
    if (best > stop_above) return best;
  }
  return best;
}

}  // namespace fsel
