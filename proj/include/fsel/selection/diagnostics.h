#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fsel/fbm/grid.h"
#include "fsel/fbm/noise.h"
#include "fsel/flow/flow.h"

namespace fsel {

struct ProbePoint {
  double t = 0.0;  // restart offset after tau
  double s = 0.0;  // elapsed time, > 0
};

struct AdmissibilityReport {
  bool ok = true;
  /// sup |P^{(-inf,tau-1],tau+t}_s| (1+t)^{(sigma-H-2delta)xi} / s^sigma
  double remote = 0.0;
  /// sup |P^{[tau-1,tau],tau+t}_s| / s^{H-delta}
  double recent = 0.0;
};

/// Both admissibility suprema over a finite probe set, with the remote past
/// truncated at the start of the bundle's history. ok iff remote <= c_Af and
/// recent <= c_Ac. The Brownian driver must cover [tau - 1, tau] with
/// history before tau - 1; otherwise the check is refused.
AdmissibilityReport admissibility_check(const NoiseBundle& noise, double tau, double sigma, double xi,
                                        double delta, double c_Af, double c_Ac,
                                        std::span<const ProbePoint> probes);

struct UpperBoundReport {
  bool ok = true;
  double max_excess = 0.0;  // largest amount by which X leaves the bound (<= 0 inside)
  double tolerance = 0.0;
};

/// Pathwise bound on [t0, t0 + 1] (or the whole path if shorter), with
/// ||W||_inf taken over the same window:
///   gamma > 0:  -phi(2 eps ||W||, A- t) <= X_t <= phi(2 eps ||W||, A+ t)
///   gamma <= 0: -phi(0, A- t) - 2 eps ||W|| <= X_t <= phi(0, A+ t) + 2 eps ||W||
/// ok iff max_excess <= tolerance, default 10 dt^{1/2}.
UpperBoundReport upper_bound_check(const Path& x, const NoiseBundle& noise, const ModelParams& p,
                                   std::optional<double> tolerance = std::nullopt);

/// T_k = sum_{j=1}^k q^j for k = 1..k_max.
std::vector<double> geometric_ladder(double q, std::size_t k_max);

/// First rung k in 0..k_max-1 whose grid Hölder seminorm of exponent
/// 1/2 - delta on [T_k, T_{k+1}] (T_0 = 0, times relative to the path start)
/// exceeds c q^{k(alpha - H)}; nullopt when no rung does. Refused if the
/// path does not reach T_{k_max}.
std::optional<std::size_t> holder_ladder_check(const Path& brownian, double q, double alpha, double H, double c,
                                               double delta, std::size_t k_max);

}  // namespace fsel
