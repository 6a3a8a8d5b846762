#include "fsel/sde/scaling.h"

#include <cmath>

#include "fsel/common/error.h"
#include "fsel/common/parallel.h"
#include "fsel/common/rng.h"
#include "fsel/fbm/noise.h"
#include "fsel/stats/stats.h"

namespace fsel {

ScalingReport scaling_check(const ModelParams& p, std::size_t n_paths, const ScalingOptions& opt,
                            std::uint64_t seed) {
  validate(p);
  if (n_paths < 100) throw RefusalError("scaling_check: need at least 100 paths");
  if (!(p.epsilon <= 1.0)) throw DomainError("scaling_check: epsilon must be <= 1");
  if (!(opt.dt > 0.0 && opt.horizon > 0.0)) throw DomainError("scaling_check: horizon and dt must be > 0");
  const auto steps = static_cast<std::size_t>(std::llround(opt.horizon / opt.dt));
  if (steps < 1 || std::abs(static_cast<double>(steps) * opt.dt - opt.horizon) > 1e-9 * opt.horizon)
    throw DomainError("scaling_check: horizon must be a whole number of steps");

  const TransitionPoint tp = transition_point(p);
  const TimeGrid unit_grid(0.0, opt.dt, steps);
  const TimeGrid eps_grid(0.0, opt.dt * tp.t_eps, steps);
  std::vector<std::size_t> probe_idx;
  for (double t : opt.probe_times) probe_idx.push_back(unit_grid.require_index(t, "scaling_check: probe time"));

  ModelParams p1 = p;
  p1.epsilon = 1.0;
  const FbmSampler eps_sampler(eps_grid, p.hurst);
  const FbmSampler unit_sampler(unit_grid, p.hurst);

  const std::size_t np = probe_idx.size();
  std::vector<double> xe(n_paths * np), x1(n_paths * np);
  parallel_for(n_paths, opt.workers, [&](std::size_t i) {
    const Path a = integrate(p, eps_sampler.sample(derive_seed(seed, 1, i)), 0.0, opt.scheme);
    const Path b = integrate(p1, unit_sampler.sample(derive_seed(seed, 2, i)), 0.0, opt.scheme);
    for (std::size_t j = 0; j < np; ++j) {
      xe[j * n_paths + i] = a[probe_idx[j]] / tp.x_eps;
      x1[j * n_paths + i] = b[probe_idx[j]];
    }
  });

  ScalingReport rep{n_paths, tp.t_eps, tp.x_eps, {}};
  for (std::size_t j = 0; j < np; ++j) {
    const std::span<const double> a(xe.data() + j * n_paths, n_paths);
    const std::span<const double> b(x1.data() + j * n_paths, n_paths);
    const double d = stats::ks_statistic(a, b);
    rep.probes.push_back({opt.probe_times[j], d, stats::ks_pvalue(d, n_paths, n_paths)});
  }
  return rep;
}

}  // namespace fsel
