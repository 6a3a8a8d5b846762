#include "fsel/flow/flow.h"

#include <cmath>
#include <string>

#include "fsel/common/error.h"

namespace fsel {

void validate(const ModelParams& p) {
  if (!(p.hurst > 0.0 && p.hurst < 1.0)) throw DomainError("hurst must lie in (0, 1)");
  if (!(p.a_plus > 0.0) || !std::isfinite(p.a_plus)) throw DomainError("a_plus must be > 0");
  if (!(p.a_minus > 0.0) || !std::isfinite(p.a_minus)) throw DomainError("a_minus must be > 0");
  if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon)) throw DomainError("epsilon must be > 0");
  if (!(p.gamma < 1.0)) throw DomainError("gamma must be < 1");
  const double floor = 1.0 - 1.0 / (2.0 * p.hurst);
  if (!(p.gamma > floor))
    throw DomainError("gamma must exceed 1 - 1/(2H) = " + std::to_string(floor));
}

double power(double x, double p) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("power: negative base");
  if (p == 1.0) return x;
  if (x == 0.0) {
    if (p > 0.0) return 0.0;
    throw DomainError("power: 0 raised to a non-positive exponent");
  }
  return std::exp(p * std::log(x));
}

double drift(double x, const ModelParams& p) {
  if (x > 0.0) return p.a_plus * power(x, p.gamma);
  if (x < 0.0) return -p.a_minus * power(-x, p.gamma);
  if (p.gamma > 0.0) return 0.0;
  throw SingularityError("drift: x = 0 is singular for gamma <= 0");
}

double flow_phi(double x, double t, double gamma) {
  if (!(gamma < 1.0)) throw DomainError("flow_phi: gamma must be < 1");
  if (!(x >= 0.0)) throw DomainError("flow_phi: x must be >= 0");
  if (!(t >= 0.0)) throw DomainError("flow_phi: t must be >= 0");
  if (t == 0.0) return x;
  const double e = 1.0 - gamma;
  return power(power(x, e) + e * t, 1.0 / e);
}

double extremal_solution(double t, Side side, const ModelParams& p) {
  return sign_of(side) * flow_phi(0.0, amplitude(p, side) * t, p.gamma);
}

TransitionPoint transition_point(const ModelParams& p) {
  validate(p);
  const double e = 1.0 - p.gamma;
  const double t_eps = power(p.epsilon, e / (1.0 - p.hurst * e));
  return {t_eps, p.epsilon * power(t_eps, p.hurst)};
}

Envelope comparison_envelope(double x_s, double w_bar, double h, const ModelParams& p, DriftMonotonicity mono) {
  if (!(w_bar >= 0.0)) throw DomainError("comparison_envelope: w_bar must be >= 0");
  if (!(x_s - w_bar > 0.0)) throw DomainError("comparison_envelope: invalid, x_s - w_bar must be > 0");
  const double Ah = p.a_plus * h;
  if (mono == DriftMonotonicity::decreasing)
    return {flow_phi(x_s + w_bar, Ah, p.gamma) - 2.0 * w_bar, flow_phi(x_s - w_bar, Ah, p.gamma) + 2.0 * w_bar};
  return {flow_phi(x_s - w_bar, Ah, p.gamma), flow_phi(x_s + w_bar, Ah, p.gamma)};
}

double c_alpha_gamma(double alpha, double gamma) {
  if (!(gamma < 1.0)) throw DomainError("c_alpha_gamma: gamma must be < 1");
  if (!(alpha > 0.0 && alpha < 1.0 / (1.0 - gamma)))
    throw DomainError("c_alpha_gamma: alpha must lie in (0, 1/(1-gamma))");
  return alpha * (1.0 - gamma) / (1.0 + alpha * (gamma - 1.0));
}

MaxDeviation max_deviation(double c_w, double M, double A, double alpha, double gamma) {
  if (!(c_w > 0.0 && M > 0.0 && A > 0.0)) throw DomainError("max_deviation: c_w, M, A must be > 0");
  const double c = c_alpha_gamma(alpha, gamma);
  const double t0 = c * M / A;
  const double h = c_w * power(t0, alpha) * power(M + A * t0, -1.0 / (1.0 - gamma));
  return {t0, h};
}

}  // namespace fsel
