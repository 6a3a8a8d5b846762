#include "fsel/sde/integrate.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsel/common/error.h"

namespace fsel {

double flow_substep(double x, double dt, const ModelParams& p) {
  if (x > 0.0) return flow_phi(x, p.a_plus * dt, p.gamma);
  if (x < 0.0) return -flow_phi(-x, p.a_minus * dt, p.gamma);
  return 0.0;
}

Path integrate(const ModelParams& p, const Path& noise, double x0, Scheme scheme, const IntegrateOptions& opt) {
  validate(p);
  if (p.gamma <= -1.0) throw DomainError("integrate: gamma <= -1 is not supported");
  if (!std::isfinite(x0)) throw DomainError("integrate: x0 must be finite");
  const auto& g = noise.grid();
  const double dt = g.dt();
  const double reg = opt.reg_delta.value_or(std::pow(dt, 1.0 / (1.0 - p.gamma)));
  if (!(reg > 0.0)) throw DomainError("integrate: reg_delta must be > 0");

  const auto w = noise.values();
  const std::size_t n = g.steps();
  std::vector<double> x(n + 1);
  x[0] = x0;

  auto euler_drift = [&](double y) {
    if (p.gamma > 0.0) return drift(y, p);
    if (y == 0.0) return 0.0;
    const double a = y > 0.0 ? p.a_plus : -p.a_minus;
    return a * power(std::max(std::abs(y), reg), p.gamma);
  };

  for (std::size_t k = 0; k < n; ++k) {
    const double dw = p.epsilon * (w[k + 1] - w[k]);
    double y = x[k];
    if (opt.drift_enabled) y = scheme == Scheme::flow_splitting ? flow_substep(y, dt, p) : y + euler_drift(y) * dt;
    y += dw;
    if (!std::isfinite(y)) throw IntegrationError(k + 1, "integrate: non-finite state");
    x[k + 1] = y;
  }
  return Path(g, std::move(x));
}

}  // namespace fsel
