#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsel/selection/detect.h"
#include "fsel/stats/stats.h"

namespace fsel {

struct ProbEstimate {
  std::size_t n_total = 0;
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  std::size_t n_undecided = 0;
  /// Fractions of all outcomes; they sum to 1.
  double p_plus = 0.0;
  double p_minus = 0.0;
  double undecided = 0.0;
  /// Fraction of decided outcomes that selected +, with Wilson intervals
  /// for both signs among decided outcomes.
  double p_plus_decided = 0.0;
  stats::Interval ci_plus;
  stats::Interval ci_minus;
};

/// Refuses batches with fewer than 100 decided outcomes.
ProbEstimate estimate_probs(std::span<const SelectionOutcome> outcomes, double z = 1.96);

struct TailFit {
  double kappa_hat = 0.0;
  double intercept = 0.0;  // c in ln S(z) = c - a z^kappa
  double scale = 0.0;      // a
  double r_squared = 0.0;
  std::vector<double> z_grid;
  std::vector<double> log_surv;
};

/// Least-squares fit of ln S(z) = c - a z^kappa to the empirical survival
/// function of psi / t_eps, over 40 log-spaced kappa in [0.05, 2]; the best
/// kappa by residual sum of squares among fits with a > 0.
///
/// Requires >= 1000 samples, a strictly increasing z grid of at least three
/// points and empirical survival >= 10/n at every z. Degenerate samples and
/// fits without a decaying solution are refused.
TailFit tail_fit(std::span<const double> psi, double t_eps, std::span<const double> z_grid);

/// z values at the empirical quantiles where survival runs geometrically
/// from 1/2 down to 20/n, deduplicated; a tail-focused default grid.
std::vector<double> tail_z_grid(std::span<const double> scaled_samples, std::size_t points = 25);

}  // namespace fsel
