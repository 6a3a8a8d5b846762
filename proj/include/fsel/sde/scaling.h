#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fsel/flow/flow.h"
#include "fsel/sde/integrate.h"

namespace fsel {

struct ScalingOptions {
  /// Horizon T and step dt in units of t_eps (X^eps) or plain time (X^1).
  double horizon = 1.0;
  double dt = 1e-3;
  std::vector<double> probe_times{1.0};
  Scheme scheme = Scheme::flow_splitting;
  std::size_t workers = 1;
};

struct ScalingProbe {
  double t = 0.0;
  double ks_distance = 0.0;
  double p_value = 1.0;
};

struct ScalingReport {
  std::size_t n_paths = 0;
  double t_eps = 1.0;
  double x_eps = 1.0;
  std::vector<ScalingProbe> probes;
};

/// Compares X^eps_{t t_eps} / x_eps against X^1_t with two independent
/// ensembles of n_paths each, started at 0 and driven by exact fBm.
/// Seeds: derive_seed(seed, 1, i) for X^eps, derive_seed(seed, 2, i) for X^1.
/// Fewer than 100 paths is refused.
ScalingReport scaling_check(const ModelParams& p, std::size_t n_paths, const ScalingOptions& opt,
                            std::uint64_t seed);

}  // namespace fsel
