#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fsel::stats {

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic p-value of the two-sample KS statistic (Kolmogorov
/// distribution with the Stephens small-sample correction).
double ks_pvalue(double d, std::size_t n1, std::size_t n2);

/// Asymptotic critical value c(alpha) * sqrt((n1 + n2) / (n1 n2)).
double ks_critical_value(double alpha, std::size_t n1, std::size_t n2);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z);

/// Standard error of a binomial proportion.
double binomial_sigma(double p, std::size_t trials);

/// Linear-interpolation quantile (type 7). Empty input -> NaN.
double quantile(std::span<const double> values, double q);

double mean(std::span<const double> values);

}  // namespace fsel::stats
