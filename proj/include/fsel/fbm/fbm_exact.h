#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "fsel/common/rng.h"
#include "fsel/fbm/grid.h"

namespace fsel {

/// Largest step count accepted by the exact generator.
inline constexpr std::size_t kExactFbmMaxSteps = std::size_t{1} << 20;

/// Steps up to which the Cholesky factor of the increment covariance is
/// used instead of circulant embedding.
inline constexpr std::size_t kCholeskyMaxSteps = 64;

/// fBm covariance R(s,t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double s, double t, double H);

/// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(std::size_t k, double H);

/// Exact sampler of fBm on a fixed grid. Construction does the expensive
/// factorization once; sample() is then cheap and reentrant.
class FbmSampler {
 public:
  FbmSampler(const TimeGrid& grid, double H);
  ~FbmSampler();
  FbmSampler(FbmSampler&&) noexcept;
  FbmSampler& operator=(FbmSampler&&) noexcept;

  const TimeGrid& grid() const noexcept { return grid_; }
  double hurst() const noexcept { return H_; }

  /// Path W^H on the grid with W^H(t0) = 0.
  Path sample(Engine& rng) const;
  Path sample(std::uint64_t seed) const;

  /// Unit-variance-scaled fGn increments (length n) before the dt^H factor.
  std::vector<double> sample_increments(Engine& rng) const;

 private:
  struct Impl;
  TimeGrid grid_;
  double H_;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience: the path of FbmSampler(grid, H).sample(seed).
Path generate_fbm_exact(const TimeGrid& grid, double H, std::uint64_t seed);

}  // namespace fsel
