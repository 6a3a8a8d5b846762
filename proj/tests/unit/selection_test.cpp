#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fsel/common/error.h"
#include "fsel/common/rng.h"
#include "fsel/fbm/fbm_exact.h"
#include "fsel/fbm/noise.h"
#include "fsel/sde/integrate.h"
#include "fsel/selection/detect.h"
#include "fsel/selection/diagnostics.h"
#include "fsel/selection/estimate.h"
#include "fsel/stats/stats.h"

namespace fsel {
namespace {

const ModelParams kModel{0.5, 0.5, 1.0, 1.0, 0.1};

TimeGrid model_grid(const ModelParams& p, double horizon_over_t_eps, double dt_over_t_eps) {
  const double t_eps = transition_point(p).t_eps;
  const auto n = static_cast<std::size_t>(std::llround(horizon_over_t_eps / dt_over_t_eps));
  return TimeGrid(0.0, dt_over_t_eps * t_eps, n);
}

Path from_values(const TimeGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.nodes());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(g.time(k));
  return Path(g, std::move(v));
}

// Direct O(n^2) reading of the detector contract.
SelectionOutcome detect_brute(const Path& x, const SelectionDetector& d) {
  const std::size_t n = x.grid().steps(), i_max = d.last_candidate();
  auto valid = [&](std::size_t i) {
    if (x[i] == 0.0) return false;
    const double sigma = x[i] > 0 ? 1.0 : -1.0;
    const Side side = sigma > 0 ? Side::plus : Side::minus;
    for (std::size_t j = i + 1; j <= n; ++j)
      if (!(sigma * x[j] > d.envelope(j - i, side))) return false;
    return true;
  };
  std::optional<std::size_t> bad;
  for (std::size_t i = 0; i <= i_max; ++i)
    if (!valid(i)) bad = i;

  SelectionOutcome out;
  if (bad && *bad == i_max) return out;
  const std::size_t psi = bad ? *bad + 1 : 0;
  out.sign = x[psi] > 0 ? Selected::plus : Selected::minus;
  out.psi_hat = x.time(psi);
  return out;
}

std::vector<Path> simulate(const ModelParams& p, const TimeGrid& g, std::size_t count, std::uint64_t seed,
                           bool negate = false) {
  const FbmSampler sampler(g, p.hurst);
  std::vector<Path> out;
  for (std::size_t i = 0; i < count; ++i) {
    NoiseBundle nb = exact_bundle(sampler, derive_seed(seed, 0, i));
    if (negate) nb = negated(nb);
    out.push_back(integrate(p, nb, 0.0, Scheme::flow_splitting));
  }
  return out;
}

// ---- detection ---------------------------------------------------------------

TEST(Detect, ExtremalPathIsSelectedAtOnce) {
  const TimeGrid g = model_grid(kModel, 20, 1e-2);
  const auto tp = transition_point(kModel);
  const Path x = from_values(g, [&](double t) { return flow_phi(tp.x_eps, t, 0.5); });
  const auto o = detect_selection(x, kModel, 1.0);
  EXPECT_EQ(o.sign, Selected::plus);
  EXPECT_EQ(o.psi_hat, 0.0);
  EXPECT_TRUE(o.violations.empty());
}

TEST(Detect, JumpOntoExtremalGivesJumpTime) {
  const TimeGrid g = model_grid(kModel, 20, 1e-2);
  const auto tp = transition_point(kModel);
  const double s = g.time(300);
  const Path x = from_values(g, [&](double t) {
    return t < s - 1e-12 ? -flow_phi(tp.x_eps, t, 0.5) - 1.0 : flow_phi(tp.x_eps, t - s, 0.5);
  });
  const auto o = detect_selection(x, kModel, 1.0);
  EXPECT_EQ(o.sign, Selected::plus);
  EXPECT_DOUBLE_EQ(o.psi_hat, s);
  ASSERT_FALSE(o.violations.empty());
  EXPECT_DOUBLE_EQ(o.violations.front().time, s);
}

TEST(Detect, RefusesShortHorizon) {
  EXPECT_THROW(detect_selection(Path(model_grid(kModel, 9, 1e-2), std::vector<double>(901, 1.0)), kModel, 1.0),
               RefusalError);
}

TEST(Detect, MatchesBruteForce) {
  const TimeGrid g = model_grid(kModel, 12, 2e-2);
  const auto paths = simulate(kModel, g, 60, 31);
  for (MarginMode mode : {MarginMode::paper, MarginMode::relative})
    for (double alpha : {0.8, 1.0, 1.5}) {
      DetectOptions opt;
      opt.margin_mode = mode;
      opt.min_tail = 2.0;
      const SelectionDetector d(kModel, g, alpha, opt);
      for (const Path& x : paths) {
        const auto fast = d.detect(x), slow = detect_brute(x, d);
        ASSERT_EQ(fast.sign, slow.sign);
        if (fast.sign != Selected::undecided) ASSERT_EQ(fast.psi_hat, slow.psi_hat);
      }
    }
}

TEST(Detect, ViolationsStartAfterFailingCandidate) {
  const TimeGrid g = model_grid(kModel, 20, 1e-2);
  for (const Path& x : simulate(kModel, g, 50, 77)) {
    const auto o = detect_selection(x, kModel, 1.0);
    if (o.sign == Selected::undecided) continue;
    if (o.psi_hat == 0.0) continue;
    ASSERT_FALSE(o.violations.empty());
    for (const auto& v : o.violations) {
      EXPECT_GE(v.deficit, 0.0);
      EXPECT_LE(v.time, g.end());
    }
  }
}

TEST(Detect, LooserMarginNeverDelays) {
  const TimeGrid g = model_grid(kModel, 20, 1e-2);
  DetectOptions tight, loose;
  tight.margin_mode = loose.margin_mode = MarginMode::relative;
  tight.relative_delta = 0.05;
  loose.relative_delta = 0.3;
  const SelectionDetector dt(kModel, g, 1.0, tight), dl(kModel, g, 1.0, loose);
  for (const Path& x : simulate(kModel, g, 100, 5)) {
    const auto a = dt.detect(x), b = dl.detect(x);
    if (a.sign != Selected::undecided) {
      ASSERT_NE(b.sign, Selected::undecided);
      EXPECT_LE(b.psi_hat, a.psi_hat);
    }
  }
}

TEST(Detect, DecidedSignAgreesWithEndpoint) {
  const TimeGrid g = model_grid(kModel, 30, 1e-2);
  for (const Path& x : simulate(kModel, g, 200, 6)) {
    const auto o = detect_selection(x, kModel, 1.0);
    if (o.sign == Selected::plus) EXPECT_GT(x[g.steps()], 0.0);
    if (o.sign == Selected::minus) EXPECT_LT(x[g.steps()], 0.0);
  }
}

TEST(Detect, NegatedNoiseSwapsSignKeepsTime) {
  const TimeGrid g = model_grid(kModel, 20, 1e-2);
  const auto a = simulate(kModel, g, 100, 8), b = simulate(kModel, g, 100, 8, true);
  const SelectionDetector d(kModel, g, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto oa = d.detect(a[i]), ob = d.detect(b[i]);
    if (oa.sign == Selected::undecided) {
      EXPECT_EQ(ob.sign, Selected::undecided);
      continue;
    }
    EXPECT_EQ(ob.sign, oa.sign == Selected::plus ? Selected::minus : Selected::plus);
    EXPECT_EQ(ob.psi_hat, oa.psi_hat);
  }
}

TEST(Detect, SmallNoiseBatchIsAlmostAlwaysDecided) {
  const ModelParams p{0.5, 0.5, 1.0, 1.0, 0.01};
  const TimeGrid g = model_grid(p, 50, 1e-3);
  const SelectionDetector d(p, g, 1.0);
  const FbmSampler sampler(g, 0.5);
  std::size_t decided = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const Path x = integrate(p, exact_bundle(sampler, derive_seed(12, 0, i)), 0.0, Scheme::flow_splitting);
    if (d.detect(x).sign != Selected::undecided) ++decided;
  }
  EXPECT_GE(decided, 990u);
}

// ---- probabilities -----------------------------------------------------------------

std::vector<SelectionOutcome> synthetic(std::size_t plus, std::size_t minus, std::size_t undecided) {
  std::vector<SelectionOutcome> v;
  for (std::size_t i = 0; i < plus; ++i) v.push_back({Selected::plus, 1.0, {}});
  for (std::size_t i = 0; i < minus; ++i) v.push_back({Selected::minus, 1.0, {}});
  for (std::size_t i = 0; i < undecided; ++i) v.push_back({});
  return v;
}

TEST(Estimate, PartitionAndIntervals) {
  const auto e = estimate_probs(synthetic(70, 50, 30));
  EXPECT_EQ(e.n_total, 150u);
  EXPECT_DOUBLE_EQ(e.p_plus + e.p_minus + e.undecided, 1.0);
  EXPECT_DOUBLE_EQ(e.p_plus_decided, 70.0 / 120.0);
  const auto ci = stats::wilson_interval(70, 120, 1.96);
  EXPECT_DOUBLE_EQ(e.ci_plus.lo, ci.lo);
  EXPECT_DOUBLE_EQ(e.ci_plus.hi, ci.hi);

  const auto all = estimate_probs(synthetic(200, 0, 0));
  EXPECT_DOUBLE_EQ(all.p_plus, 1.0);
  EXPECT_THROW(estimate_probs(synthetic(50, 49, 500)), RefusalError);
}

// ---- tail fit --------------------------------------------------------------------

std::vector<double> weibull(double kappa, double scale, std::size_t n, std::uint64_t seed) {
  Engine rng(seed);
  std::weibull_distribution<double> w(kappa, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = w(rng);
  return v;
}

TailFit fit(const std::vector<double>& scaled, double t_eps) {
  std::vector<double> psi(scaled);
  for (auto& x : psi) x *= t_eps;
  return tail_fit(psi, t_eps, tail_z_grid(scaled));
}

TEST(TailFit, RecoversWeibullShape) {
  const auto r = fit(weibull(0.5, 1.0, 10000, 1), 0.3);
  EXPECT_NEAR(r.kappa_hat, 0.5, 0.1);
  EXPECT_GT(r.r_squared, 0.99);
  for (std::size_t i = 1; i < r.z_grid.size(); ++i) EXPECT_GT(r.z_grid[i], r.z_grid[i - 1]);
}

TEST(TailFit, ExponentialGivesOne) {
  const auto r = fit(weibull(1.0, 2.0, 10000, 2), 1.0);
  EXPECT_NEAR(r.kappa_hat, 1.0, 0.1);
}

TEST(TailFit, ShiftByOneTransitionTimeBarelyMatters) {
  auto s = weibull(1.0, 5.0, 10000, 3);
  const double before = fit(s, 1.0).kappa_hat;
  for (auto& x : s) x += 1.0;
  EXPECT_LT(std::abs(fit(s, 1.0).kappa_hat - before), 0.05);
}

TEST(TailFit, Refusals) {
  EXPECT_THROW(fit(weibull(1.0, 1.0, 999, 4), 1.0), RefusalError);
  const std::vector<double> flat(2000, 3.0);
  const std::vector<double> z{1.0, 2.0, 3.0};
  EXPECT_THROW(tail_fit(flat, 1.0, z), RefusalError);
  const auto s = weibull(1.0, 1.0, 2000, 5);
  const std::vector<double> too_far{0.5, 1.0, 50.0};
  EXPECT_THROW(tail_fit(s, 1.0, too_far), RefusalError);
}

// ---- diagnostics -----------------------------------------------------------------

TEST(UpperBound, Examples) {
  const TimeGrid g(0.0, 1e-3, 1000);
  const ModelParams p{0.5, 0.5, 1.0, 1.0, 0.05};
  const NoiseBundle quiet{std::nullopt, std::nullopt, Path(g, std::vector<double>(1001, 0.0))};
  const auto r = upper_bound_check(integrate(p, quiet, 0.0, Scheme::flow_splitting), quiet, p);
  EXPECT_TRUE(r.ok);
  EXPECT_LE(r.max_excess, 0.0);

  const ModelParams q{-0.5, 0.3, 1.0, 1.0, 0.5};
  const NoiseBundle nb = exact_bundle(g, 0.3, 3);
  IntegrateOptions off;
  off.drift_enabled = false;
  const auto pure = upper_bound_check(integrate(q, nb, 0.0, Scheme::euler, off), nb, q);
  EXPECT_TRUE(pure.ok);
  EXPECT_LE(pure.max_excess, 0.0);

  const NoiseBundle other = exact_bundle(TimeGrid(0.0, 2e-3, 500), 0.5, 1);
  EXPECT_THROW(upper_bound_check(integrate(p, quiet, 0.0, Scheme::flow_splitting), other, p), RefusalError);
}

TEST(UpperBound, SimulatedPathsStayInside) {
  const ModelParams p{0.5, 0.5, 1.0, 1.0, 0.05};
  const TimeGrid g(0.0, 1e-3, 1000);
  for (std::size_t i = 0; i < 200; ++i) {
    const NoiseBundle nb = exact_bundle(g, 0.5, derive_seed(44, 0, i));
    EXPECT_TRUE(upper_bound_check(integrate(p, nb, 0.0, Scheme::flow_splitting), nb, p).ok);
  }
}

TEST(Ladder, Geometric) {
  EXPECT_EQ(geometric_ladder(2.0, 3), (std::vector<double>{2, 6, 14}));
  EXPECT_TRUE(geometric_ladder(2.0, 0).empty());
  const auto t = geometric_ladder(1.3, 12);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_NEAR(t[k] - t[k - 1], std::pow(1.3, k + 1), 1e-12);
}

TEST(Ladder, FirstRungAboveThreshold) {
  const TimeGrid g(0.0, 0.5, 60);  // covers T_4 = 30 for q = 2
  EXPECT_FALSE(holder_ladder_check(Path(g, std::vector<double>(61, 0.0)), 2.0, 1.0, 0.5, 0.5, 0.1, 4).has_value());
  std::vector<double> v(61, 0.0);
  for (std::size_t k = 20; k <= 60; ++k) v[k] = 1e3;  // jump between t = 9.5 and 10, inside [6, 14]
  EXPECT_EQ(holder_ladder_check(Path(g, v), 2.0, 1.0, 0.5, 0.5, 0.1, 4), std::optional<std::size_t>(2));
  EXPECT_THROW(holder_ladder_check(Path(g, v), 2.0, 1.0, 0.5, 0.5, 0.1, 5), RefusalError);
}

NoiseBundle scaled(const NoiseBundle& nb, double lambda) {
  auto scale = [&](const Path& p) {
    std::vector<double> v(p.values().begin(), p.values().end());
    for (double& x : v) x *= lambda;
    return Path(p.grid(), v);
  };
  NoiseBundle out = nb;
  out.fbm = scale(nb.fbm);
  out.brownian = scale(*nb.brownian);
  out.history = scale(*nb.history);
  return out;
}

TEST(Admissibility, ZeroLinearAndMarkov) {
  const TimeGrid g(0.0, 1.0 / 64, 192);
  const ProbePoint probes[] = {{0.0, 0.3}, {1.0, 1.0}, {5.0, 2.0}};
  const NoiseBundle nb = volterra_bundle(g, 0.3, 3.0, 15);

  const auto base = admissibility_check(nb, 2.0, 1.0, 0.4, 0.05, 1e9, 1e9, probes);
  EXPECT_GT(base.remote, 0.0);
  EXPECT_GT(base.recent, 0.0);
  EXPECT_TRUE(base.ok);
  const auto big = admissibility_check(scaled(nb, 2.5), 2.0, 1.0, 0.4, 0.05, 1e9, 1e9, probes);
  EXPECT_NEAR(big.remote, 2.5 * base.remote, 1e-12 * big.remote);
  EXPECT_NEAR(big.recent, 2.5 * base.recent, 1e-12 * big.recent);

  const auto zero = admissibility_check(scaled(nb, 0.0), 2.0, 1.0, 0.4, 0.05, 0.0, 0.0, probes);
  EXPECT_TRUE(zero.ok);
  EXPECT_EQ(zero.remote, 0.0);
  EXPECT_EQ(zero.recent, 0.0);

  const auto markov = admissibility_check(volterra_bundle(g, 0.5, 3.0, 15), 2.0, 1.0, 0.4, 0.05, 0.0, 0.0, probes);
  EXPECT_TRUE(markov.ok);
  EXPECT_EQ(markov.remote, 0.0);
  EXPECT_EQ(markov.recent, 0.0);

  EXPECT_THROW(admissibility_check(volterra_bundle(g, 0.3, 0.0, 15), 0.5, 1.0, 0.4, 0.05, 1, 1, probes),
               RefusalError);
}

}  // namespace
}  // namespace fsel
