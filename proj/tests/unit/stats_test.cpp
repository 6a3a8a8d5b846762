#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fsel/common/parallel.h"
#include "fsel/common/rng.h"
#include "fsel/stats/stats.h"

namespace fsel {
namespace {

// sup |F1 - F2| evaluated at every sample point.
double ks_brute(const std::vector<double>& a, const std::vector<double>& b) {
  auto ecdf = [](const std::vector<double>& v, double x) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [x](double y) { return y <= x; })) /
           static_cast<double>(v.size());
  };
  double d = 0.0;
  for (double x : a) d = std::max(d, std::abs(ecdf(a, x) - ecdf(b, x)));
  for (double x : b) d = std::max(d, std::abs(ecdf(a, x) - ecdf(b, x)));
  return d;
}

TEST(Ks, MatchesBruteForceWithTies) {
  Engine rng(5);
  std::uniform_int_distribution<int> die(0, 9);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(37), b(53);
    for (auto& x : a) x = die(rng);
    for (auto& x : b) x = die(rng) + (rep % 3);
    EXPECT_NEAR(stats::ks_statistic(a, b), ks_brute(a, b), 1e-15);
  }
}

TEST(Ks, PvalueRoughlyUniformUnderNull) {
  Engine rng(11);
  std::normal_distribution<double> g;
  int below = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> a(300), b(300);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    if (stats::ks_pvalue(stats::ks_statistic(a, b), 300, 300) < 0.1) ++below;
  }
  // Binomial(400, 0.1): mean 40, sd 6.
  EXPECT_GT(below, 20);
  EXPECT_LT(below, 60);
}

TEST(Ks, CriticalValueInvertsPvalue) {
  const double c = stats::ks_critical_value(0.05, 1000, 1000);
  EXPECT_NEAR(c, 1.358 * std::sqrt(2.0 / 1000.0), 2e-3);
  EXPECT_NEAR(stats::ks_pvalue(c, 1000, 1000), 0.05, 0.01);
}

TEST(Wilson, ClosedForm) {
  const double z = 1.96, n = 10, p = 0.5;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  const auto ci = stats::wilson_interval(5, 10, z);
  EXPECT_NEAR(ci.lo, centre - half, 1e-14);
  EXPECT_NEAR(ci.hi, centre + half, 1e-14);
  const auto all = stats::wilson_interval(10, 10, z);
  EXPECT_LT(all.lo, 1.0);
  EXPECT_DOUBLE_EQ(all.hi, 1.0);
}

TEST(Quantile, Type7) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(stats::quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(stats::quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(stats::quantile(v, 1.0), 4.0);
  EXPECT_TRUE(std::isnan(stats::quantile(std::vector<double>{}, 0.5)));
  EXPECT_DOUBLE_EQ(stats::mean(v), 2.5);
}

TEST(Seeds, DerivedSeedsAreDistinctAndStable) {
  EXPECT_EQ(derive_seed(1, 0, 0), derive_seed(1, 0, 0));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
}

TEST(Parallel, EveryIndexOnceAndLowestErrorWins) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

}  // namespace
}  // namespace fsel
