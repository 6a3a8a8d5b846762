#include "fsel/selection/estimate.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsel/common/error.h"

namespace fsel {

ProbEstimate estimate_probs(std::span<const SelectionOutcome> outcomes, double z) {
  ProbEstimate e;
  e.n_total = outcomes.size();
  for (const auto& o : outcomes) {
    switch (o.sign) {
      case Selected::plus: ++e.n_plus; break;
      case Selected::minus: ++e.n_minus; break;
      case Selected::undecided: ++e.n_undecided; break;
    }
  }
  const std::size_t decided = e.n_plus + e.n_minus;
  if (decided < 100)
    throw RefusalError("estimate_probs: " + std::to_string(decided) + " decided outcomes, need at least 100");
  const auto total = static_cast<double>(e.n_total);
  e.p_plus = static_cast<double>(e.n_plus) / total;
  e.p_minus = static_cast<double>(e.n_minus) / total;
  e.undecided = static_cast<double>(e.n_undecided) / total;
  e.p_plus_decided = static_cast<double>(e.n_plus) / static_cast<double>(decided);
  e.ci_plus = stats::wilson_interval(e.n_plus, decided, z);
  e.ci_minus = stats::wilson_interval(e.n_minus, decided, z);
  return e;
}

TailFit tail_fit(std::span<const double> psi, double t_eps, std::span<const double> z_grid) {
  const std::size_t n = psi.size();
  if (n < 1000) throw RefusalError("tail_fit: need at least 1000 samples, got " + std::to_string(n));
  if (!(t_eps > 0.0)) throw DomainError("tail_fit: t_eps must be > 0");
  if (z_grid.size() < 3) throw RefusalError("tail_fit: need at least three z values");
  for (std::size_t k = 1; k < z_grid.size(); ++k)
    if (!(z_grid[k] > z_grid[k - 1])) throw DomainError("tail_fit: z grid must be strictly increasing");

  std::vector<double> s(psi.begin(), psi.end());
  for (auto& v : s) {
    if (!std::isfinite(v)) throw DomainError("tail_fit: non-finite sample");
    v /= t_eps;
  }
  std::sort(s.begin(), s.end());
  if (s.front() == s.back()) throw RefusalError("tail_fit: all samples are equal");

  TailFit fit;
  fit.z_grid.assign(z_grid.begin(), z_grid.end());
  const double floor = 10.0 / static_cast<double>(n);
  for (double z : z_grid) {
    const auto above = static_cast<double>(s.end() - std::upper_bound(s.begin(), s.end(), z));
    const double surv = above / static_cast<double>(n);
    if (surv < floor) throw RefusalError("tail_fit: survival at z = " + std::to_string(z) + " is below 10/n");
    fit.log_surv.push_back(std::log(surv));
  }

  const auto m = static_cast<double>(fit.z_grid.size());
  double ybar = 0.0;
  for (double y : fit.log_surv) ybar += y;
  ybar /= m;
  double sst = 0.0;
  for (double y : fit.log_surv) sst += (y - ybar) * (y - ybar);
  if (!(sst > 0.0)) throw RefusalError("tail_fit: survival is flat over the z grid");

  double best = std::numeric_limits<double>::infinity();
  constexpr int kGrid = 40;
  const double lk0 = std::log(0.05), lk1 = std::log(2.0);
  for (int g = 0; g < kGrid; ++g) {
    const double kappa = std::exp(lk0 + (lk1 - lk0) * g / (kGrid - 1));
    double xbar = 0.0;
    std::vector<double> x(fit.z_grid.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = std::pow(fit.z_grid[k], kappa);
      xbar += x[k];
    }
    xbar /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      sxx += (x[k] - xbar) * (x[k] - xbar);
      sxy += (x[k] - xbar) * (fit.log_surv[k] - ybar);
    }
    if (!(sxx > 0.0)) continue;
    const double slope = sxy / sxx;
    const double a = -slope;
    if (!(a > 0.0)) continue;
    const double c = ybar - slope * xbar;
    double ssr = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r = fit.log_surv[k] - (c + slope * x[k]);
      ssr += r * r;
    }
    if (ssr < best) {
      best = ssr;
      fit.kappa_hat = kappa;
      fit.intercept = c;
      fit.scale = a;
      fit.r_squared = 1.0 - ssr / sst;
    }
  }
  if (!std::isfinite(best)) throw RefusalError("tail_fit: no kappa gives a decaying fit");
  return fit;
}

std::vector<double> tail_z_grid(std::span<const double> scaled_samples, std::size_t points) {
  const auto n = static_cast<double>(scaled_samples.size());
  if (scaled_samples.size() < 40 || points < 3) throw RefusalError("tail_z_grid: too few samples or points");
  const double s_hi = 0.5, s_lo = 20.0 / n;
  std::vector<double> z;
  for (std::size_t k = 0; k < points; ++k) {
    const double surv = s_hi * std::pow(s_lo / s_hi, static_cast<double>(k) / static_cast<double>(points - 1));
    const double q = stats::quantile(scaled_samples, 1.0 - surv);
    if (z.empty() || q > z.back()) z.push_back(q);
  }
  return z;
}

}  // namespace fsel
