#include "fsel/selection/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsel/common/error.h"
#include "fsel/fbm/norms.h"
#include "fsel/fbm/volterra.h"

namespace fsel {

AdmissibilityReport admissibility_check(const NoiseBundle& noise, double tau, double sigma, double xi,
                                        double delta, double c_Af, double c_Ac,
                                        std::span<const ProbePoint> probes) {
  const Path b = noise.brownian_with_history();
  const auto& g = b.grid();
  const double tol = 1e-9 * g.dt();
  if (tau - 1.0 < g.t0() - tol || tau > g.end() + tol)
    throw RefusalError("admissibility_check: Brownian data does not cover [tau - 1, tau]");
  for (const auto& pr : probes)
    if (!(pr.t >= 0.0 && pr.s > 0.0)) throw DomainError("admissibility_check: probes need t >= 0, s > 0");

  const double H = noise.hurst;
  const double decay = (sigma - H - 2.0 * delta) * xi;
  AdmissibilityReport rep;
  const bool has_remote = tau - 1.0 > g.t0() + tol;
  for (const auto& pr : probes) {
    const double h[1] = {pr.s};
    if (has_remote) {
      const double P = past_process_at(b, H, {g.t0(), tau - 1.0, tau + pr.t}, h)[0];
      rep.remote = std::max(rep.remote, std::abs(P) * std::pow(1.0 + pr.t, decay) / std::pow(pr.s, sigma));
    }
    const double P = past_process_at(b, H, {tau - 1.0, tau, tau + pr.t}, h)[0];
    rep.recent = std::max(rep.recent, std::abs(P) / std::pow(pr.s, H - delta));
  }
  rep.ok = rep.remote <= c_Af && rep.recent <= c_Ac;
  return rep;
}

UpperBoundReport upper_bound_check(const Path& x, const NoiseBundle& noise, const ModelParams& p,
                                   std::optional<double> tolerance) {
  if (!(x.grid() == noise.grid())) throw RefusalError("upper_bound_check: path and noise grids differ");
  const auto& g = x.grid();
  UpperBoundReport rep;
  rep.tolerance = tolerance.value_or(10.0 * std::sqrt(g.dt()));
  const std::size_t last = std::min(g.steps(), static_cast<std::size_t>(std::floor(1.0 / g.dt() + 1e-9)));
  const auto w = noise.fbm.values();
  double wsup = 0.0;
  for (std::size_t k = 0; k <= last; ++k) wsup = std::max(wsup, std::abs(w[k]));

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= last; ++k) {
    const double t = static_cast<double>(k) * g.dt();
    double lo, hi;
    if (p.gamma > 0.0) {
      lo = -flow_phi(2.0 * p.epsilon * wsup, p.a_minus * t, p.gamma);
      hi = flow_phi(2.0 * p.epsilon * wsup, p.a_plus * t, p.gamma);
    } else {
      lo = -flow_phi(0.0, p.a_minus * t, p.gamma) - 2.0 * p.epsilon * wsup;
      hi = flow_phi(0.0, p.a_plus * t, p.gamma) + 2.0 * p.epsilon * wsup;
    }
    worst = std::max({worst, x[k] - hi, lo - x[k]});
  }
  rep.max_excess = worst;
  rep.ok = worst <= rep.tolerance;
  return rep;
}

std::vector<double> geometric_ladder(double q, std::size_t k_max) {
  if (!(q > 1.0)) throw DomainError("geometric_ladder: q must be > 1");
  std::vector<double> T;
  T.reserve(k_max);
  double term = 1.0, sum = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    term *= q;
    sum += term;
    T.push_back(sum);
  }
  return T;
}

std::optional<std::size_t> holder_ladder_check(const Path& brownian, double q, double alpha, double H, double c,
                                               double delta, std::size_t k_max) {
  if (!(delta < 0.5)) throw DomainError("holder_ladder_check: delta must be < 1/2");
  const auto T = geometric_ladder(q, k_max);
  const auto& g = brownian.grid();
  const double span = g.end() - g.t0();
  if (k_max > 0 && T.back() > span + 1e-9 * g.dt())
    throw RefusalError("holder_ladder_check: path ends before T_k_max");
  const double exponent = 0.5 - delta;
  for (std::size_t k = 0; k < k_max; ++k) {
    const double a = k == 0 ? 0.0 : T[k - 1];
    const double b = T[k];
    const auto first = static_cast<std::size_t>(std::ceil(a / g.dt() - 1e-9));
    const auto last = std::min(g.steps(), static_cast<std::size_t>(std::floor(b / g.dt() + 1e-9)));
    if (last <= first) continue;
    const double threshold = c * std::pow(q, static_cast<double>(k) * (alpha - H));
    if (holder_seminorm(brownian, first, last, exponent, threshold) > threshold) return k;
  }
  return std::nullopt;
}

}  // namespace fsel
