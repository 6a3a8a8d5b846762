#pragma once

#include <cstdint>
#include <optional>

#include "fsel/fbm/fbm_exact.h"
#include "fsel/fbm/grid.h"

namespace fsel {

enum class NoiseKind { exact, volterra };

/// Driving noise of one path.
///
/// `fbm` is W^H on the simulation grid with W^H(t0) = 0. `brownian`, when
/// present, is the driving Brownian motion on the same grid with B(t0) = 0,
/// and `history` is that Brownian motion on [t0 - history_horizon, t0].
/// Exact bundles at H != 1/2 come from circulant embedding, which has no
/// Brownian driver, so both are absent there.
struct NoiseBundle {
  std::optional<Path> brownian;
  std::optional<Path> history;
  Path fbm;
  double hurst = 0.5;
  double history_horizon = 0.0;
  NoiseKind kind = NoiseKind::exact;

  const TimeGrid& grid() const noexcept { return fbm.grid(); }

  /// Brownian motion on [t0 - history_horizon, end] as one path.
  /// Throws RefusalError when the bundle carries no Brownian driver.
  Path brownian_with_history() const;
};

/// Exact-law fBm. At H = 1/2 the Brownian driver is the path itself.
NoiseBundle exact_bundle(const FbmSampler& sampler, std::uint64_t seed);
NoiseBundle exact_bundle(const TimeGrid& grid, double H, std::uint64_t seed);

/// Kernel-consistent noise: B is sampled on [t0 - history_horizon, end] and
///   W^H_t = int_{t0-L}^t (t-r)^{H-1/2} dB_r - int_{t0-L}^{t0} (t0-r)^{H-1/2} dB_r,
/// the Mandelbrot-Van Ness field truncated at L = history_horizon (rounded up
/// to whole steps) and without the normalizing constant, so that increments
/// split exactly into riemann_liouville + past_process. Sim-grid increments
/// are drawn before history increments, so the Brownian motion on the
/// simulation grid does not depend on L.
NoiseBundle volterra_bundle(const TimeGrid& grid, double H, double history_horizon, std::uint64_t seed);

/// Bundle with every noise path multiplied by -1.
NoiseBundle negated(const NoiseBundle& noise);

}  // namespace fsel
