#include "fsel/fbm/noise.h"

#include <cmath>

#include "fsel/common/error.h"
#include "fsel/fbm/volterra.h"

namespace fsel {

Path NoiseBundle::brownian_with_history() const {
  if (!brownian) throw RefusalError("noise bundle carries no Brownian driver");
  if (!history) return *brownian;
  const auto h = history->values();
  const auto b = brownian->values();
  std::vector<double> all(h.begin(), h.end());
  all.insert(all.end(), b.begin() + 1, b.end());
  const auto& hg = history->grid();
  return Path(TimeGrid(hg.t0(), hg.dt(), hg.steps() + brownian->grid().steps()), std::move(all));
}

NoiseBundle exact_bundle(const FbmSampler& sampler, std::uint64_t seed) {
  Path w = sampler.sample(seed);
  NoiseBundle nb{std::nullopt, std::nullopt, w, sampler.hurst(), 0.0, NoiseKind::exact};
  if (sampler.hurst() == 0.5) nb.brownian = std::move(w);
  return nb;
}

NoiseBundle exact_bundle(const TimeGrid& grid, double H, std::uint64_t seed) {
  return exact_bundle(FbmSampler(grid, H), seed);
}

NoiseBundle volterra_bundle(const TimeGrid& grid, double H, double history_horizon, std::uint64_t seed) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
  if (!(history_horizon >= 0.0) || !std::isfinite(history_horizon))
    throw DomainError("history_horizon must be finite and >= 0");
  const double dt = grid.dt();
  const std::size_t n = grid.steps();
  const auto nh = static_cast<std::size_t>(std::ceil(history_horizon / dt - 1e-9));

  Engine rng(seed);
  std::normal_distribution<double> normal;
  const double sd = std::sqrt(dt);
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) b[k + 1] = b[k] + sd * normal(rng);
  // history[j] = B(t0 - (nh - j) dt), ending at B(t0) = 0.
  std::vector<double> hist(nh + 1, 0.0);
  for (std::size_t j = nh; j > 0; --j) hist[j - 1] = hist[j] - sd * normal(rng);

  std::vector<double> ext(hist);
  ext.insert(ext.end(), b.begin() + 1, b.end());
  const TimeGrid ext_grid(grid.t0() - static_cast<double>(nh) * dt, dt, nh + n);
  const Path rl = riemann_liouville(Path(ext_grid, std::move(ext)), H);
  const auto r = rl.values();
  std::vector<double> w(n + 1);
  for (std::size_t k = 0; k <= n; ++k) w[k] = r[nh + k] - r[nh];
  w[0] = 0.0;

  NoiseBundle nb{Path(grid, std::move(b)), std::nullopt, Path(grid, std::move(w)), H,
                 static_cast<double>(nh) * dt, NoiseKind::volterra};
  if (nh > 0) nb.history = Path(TimeGrid(ext_grid.t0(), dt, nh), std::move(hist));
  return nb;
}

NoiseBundle negated(const NoiseBundle& noise) {
  auto neg = [](const Path& p) {
    std::vector<double> v(p.values().begin(), p.values().end());
    for (auto& x : v) x = -x;
    return Path(p.grid(), std::move(v));
  };
  NoiseBundle out{std::nullopt, std::nullopt, neg(noise.fbm), noise.hurst, noise.history_horizon, noise.kind};
  if (noise.brownian) out.brownian = neg(*noise.brownian);
  if (noise.history) out.history = neg(*noise.history);
  return out;
}

}  // namespace fsel
