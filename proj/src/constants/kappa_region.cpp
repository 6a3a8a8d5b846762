#include <cmath>

#include "fsel/common/error.h"
#include "fsel/constants/solver.h"
#include "fsel/constants/verify.h"

namespace fsel {

double max_feasible_kappa(double gamma, double H, const Stage2Options& opt, double tol) {
  const double top = 1.0 / (1.0 - gamma);
  auto feasible = [&](double kappa) {
    const double alpha = 0.5 * (1.5 * kappa + H + top);
    try {
      const auto l = solve_stage2(solve_fixed(gamma, H, alpha, kappa), opt);
      return verify_ledger(l, gamma, H).ok;
    } catch (const InfeasibleError&) {
      return false;
    }
  };
  double lo = 0.0;
  double hi = std::min(1.0, (top - H) / 1.5);
  if (!(hi > 0.0)) throw InfeasibleError("max_feasible_kappa: 1/(1-gamma) <= H leaves no kappa", {"alpha range"});
  // Probe a small kappa first so that lo is a known feasible point.
  const double probe = std::min(1e-3, 0.5 * hi);
  if (!feasible(probe)) return 0.0;
  lo = probe;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace fsel
