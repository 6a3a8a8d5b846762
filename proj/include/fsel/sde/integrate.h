#pragma once

#include <optional>

#include "fsel/fbm/grid.h"
#include "fsel/fbm/noise.h"
#include "fsel/flow/flow.h"

namespace fsel {

enum class Scheme { euler, flow_splitting };

struct IntegrateOptions {
  /// Euler regularization width for gamma <= 0; default dt^{1/(1-gamma)}.
  std::optional<double> reg_delta;
  /// false integrates X = x0 + eps W^H (test mode, b switched off).
  bool drift_enabled = true;
};

/// Solves X_t = x0 + int_{t0}^t b(X_r) dr + eps (W^H_t - W^H_{t0}) on the
/// grid of `noise`, consuming noise increments only.
///
///   euler:          X+ = X + b_reg(X) dt + eps dW
///   flow_splitting: X+ = sign(X) phi(|X|, A^{sign} dt) + eps dW
///
/// The flow substep started at 0 stays at 0: the drift pushes away from the
/// origin and the noise alone decides the side. For the same reason the
/// flow substep never changes sign. b_reg(x) = sign(x) A (|x| v delta)^gamma
/// when gamma <= 0. gamma <= -1 is not supported.
Path integrate(const ModelParams& p, const Path& noise, double x0, Scheme scheme, const IntegrateOptions& opt = {});

inline Path integrate(const ModelParams& p, const NoiseBundle& noise, double x0, Scheme scheme,
                      const IntegrateOptions& opt = {}) {
  return integrate(p, noise.fbm, x0, scheme, opt);
}

/// One flow-splitting drift substep through dt.
double flow_substep(double x, double dt, const ModelParams& p);

}  // namespace fsel
