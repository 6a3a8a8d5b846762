#pragma once

namespace fsel {

/// Problem instance: drift exponent gamma, Hurst index, drift amplitudes on
/// each side of the origin and noise level.
struct ModelParams {
  double gamma = 0.5;
  double hurst = 0.5;
  double a_plus = 1.0;
  double a_minus = 1.0;
  double epsilon = 1.0;
};

/// Throws DomainError unless H in (0,1), A+/- > 0, epsilon > 0, gamma < 1
/// and gamma > 1 - 1/(2H).
void validate(const ModelParams& p);

enum class Side { plus, minus };

inline double amplitude(const ModelParams& p, Side s) noexcept { return s == Side::plus ? p.a_plus : p.a_minus; }
inline double sign_of(Side s) noexcept { return s == Side::plus ? 1.0 : -1.0; }

/// x^p through exp/log. 0^p = 0 for p > 0; x = 0 with p <= 0 or x < 0 is a
/// DomainError. p == 1 returns x unchanged.
double power(double x, double p);

/// b(x) = A+ x^gamma for x > 0, -A- (-x)^gamma for x < 0, 0 at x = 0 when
/// gamma > 0. x = 0 with gamma <= 0 throws SingularityError.
double drift(double x, const ModelParams& p);

/// Semi-flow of x' = x^gamma: (x^{1-gamma} + (1-gamma) t)^{1/(1-gamma)}.
/// Flow of x' = A x^gamma through time t is flow_phi(x, A t, gamma).
double flow_phi(double x, double t, double gamma);

/// x^{+,0}_t = phi(0, A+ t) and x^{-,0}_t = -phi(0, A- t).
double extremal_solution(double t, Side side, const ModelParams& p);

struct TransitionPoint {
  double t_eps = 1.0;
  double x_eps = 1.0;
};

/// t_eps = eps^{(1-gamma)/(1-H(1-gamma))}, x_eps = eps t_eps^H; the scale
/// where eps t^H and t^{1/(1-gamma)} balance.
TransitionPoint transition_point(const ModelParams& p);

/// Which comparison lemma applies: decreasing drift (gamma < 0) or
/// increasing drift (gamma > 0).
enum class DriftMonotonicity { decreasing, increasing };

struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds at elapsed time h on y_t = x_s + int_0^t A+ y^gamma + w_t, given
/// sup |w| <= w_bar and w_0 = 0:
///   decreasing: [phi(x+w, A h) - 2w, phi(x-w, A h) + 2w]
///   increasing: [phi(x-w, A h),      phi(x+w, A h)]
/// with A = A+. Requires x_s - w_bar > 0.
Envelope comparison_envelope(double x_s, double w_bar, double h, const ModelParams& p, DriftMonotonicity mono);

/// c_{alpha,gamma} = alpha(1-gamma) / (1 + alpha(gamma-1)); needs
/// 0 < alpha < 1/(1-gamma).
double c_alpha_gamma(double alpha, double gamma);

struct MaxDeviation {
  double t0 = 0.0;
  double h_max = 0.0;
};

/// Maximum of h(t) = c_w t^alpha (M + A t)^{-1/(1-gamma)} over t > 0,
/// attained at t0 = c_{alpha,gamma} M / A.
MaxDeviation max_deviation(double c_w, double M, double A, double alpha, double gamma);

}  // namespace fsel
