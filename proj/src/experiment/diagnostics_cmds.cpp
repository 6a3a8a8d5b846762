#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Dense>

#include "fsel/common/error.h"
#include "fsel/common/parallel.h"
#include "fsel/common/rng.h"
#include "fsel/constants/solver.h"
#include "fsel/constants/verify.h"
#include "fsel/experiment/runner.h"
#include "fsel/fbm/fbm_exact.h"
#include "fsel/fbm/noise.h"
#include "fsel/fbm/norms.h"
#include "fsel/fbm/volterra.h"
#include "fsel/selection/diagnostics.h"
#include "fsel/stats/stats.h"

namespace fsel {
using nlohmann::json;

namespace {

constexpr std::size_t kMaxSamples = 10'000'000;
constexpr std::size_t kMaxCovarianceSteps = 4096;
constexpr std::size_t kBatchRows = 2048;

json covariance_check(const FbmTestOptions& opt) {
  const std::size_t n = opt.n;
  const FbmSampler sampler(TimeGrid(0.0, 1.0 / static_cast<double>(n), n), opt.hurst);

  // Node 0 is identically zero and left out.
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(kBatchRows), static_cast<Eigen::Index>(n));
  for (std::size_t first = 0; first < opt.samples; first += kBatchRows) {
    const std::size_t count = std::min(kBatchRows, opt.samples - first);
    parallel_for(count, opt.workers, [&](std::size_t r) {
      const Path w = sampler.sample(derive_seed(opt.seed, 0, first + r));
      for (std::size_t k = 0; k < n; ++k) rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = w[k + 1];
    });
    const auto block = rows.topRows(static_cast<Eigen::Index>(count));
    acc.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
  }

  const double N = static_cast<double>(opt.samples);
  double max_abs = 0.0, max_z = 0.0;
  std::size_t above = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double tj = static_cast<double>(j + 1) / static_cast<double>(n);
    const double rjj = fbm_covariance(tj, tj, opt.hurst);
    for (std::size_t i = j; i < n; ++i) {
      const double ti = static_cast<double>(i + 1) / static_cast<double>(n);
      const double r = fbm_covariance(ti, tj, opt.hurst);
      const double emp = acc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / N;
      // Var(W_s W_t) = R(s,s) R(t,t) + R(s,t)^2 for a centred Gaussian pair.
      const double se = std::sqrt((fbm_covariance(ti, ti, opt.hurst) * rjj + r * r) / N);
      const double err = std::abs(emp - r);
      max_abs = std::max(max_abs, err);
      max_z = std::max(max_z, err / se);
      if (err > 4.0 * se) ++above;
    }
  }
  return {{"max_abs_error", max_abs},
          {"max_standard_errors", max_z},
          {"entries", n * (n + 1) / 2},
          {"entries_above_4se", above},
          {"within_4se", above == 0}};
}

json m_norm_check(const FbmTestOptions& opt) {
  const std::size_t n = opt.n, m = opt.ks_samples;
  std::vector<double> unit(m), wide(m);
  const TimeGrid g1(0.0, 1.0 / static_cast<double>(n), n);
  const TimeGrid g4(0.0, 4.0 / static_cast<double>(n), n);
  parallel_for(m, opt.workers, [&](std::size_t i) {
    unit[i] = norm_M(exact_bundle(g1, 0.5, derive_seed(opt.seed, 1, i)).fbm, 0.0, 1.0, opt.delta);
    wide[i] = norm_M(exact_bundle(g4, 0.5, derive_seed(opt.seed, 2, i)).fbm, 0.0, 4.0, opt.delta);
  });
  const double d = stats::ks_statistic(unit, wide);
  return {{"samples", m},
          {"delta", opt.delta},
          {"ks_statistic", d},
          {"p_value", stats::ks_pvalue(d, m, m)},
          {"critical_0.001", stats::ks_critical_value(1e-3, m, m)}};
}

json degeneracy_check(const FbmTestOptions& opt) {
  if (opt.hurst != 0.5) return {{"applies", false}};
  const std::size_t n = opt.n;
  Engine rng(derive_seed(opt.seed, 3, 0));
  std::uniform_real_distribution<double> unif(0.0, 2.0);

  bool kernel_zero = true;
  for (int i = 0; i < 1000; ++i) {
    const double s = unif(rng), r = s - unif(rng) - 1e-3, u = unif(rng);
    kernel_zero = kernel_zero && kernel_G(u, s, r, 0.5) == 0.0 && kernel_G_dr(u, s, r, 0.5) == 0.0;
  }

  const TimeGrid g(0.0, 1.0 / static_cast<double>(n), n);
  const NoiseBundle noise = volterra_bundle(g, 0.5, 1.0, derive_seed(opt.seed, 3, 1));
  const Path b = noise.brownian_with_history();

  const Path past = past_process(b, 0.5, {-1.0, 0.0, 0.0}, g);
  const bool past_zero = std::all_of(past.values().begin(), past.values().end(), [](double v) { return v == 0.0; });

  const Path rl = riemann_liouville(*noise.brownian, 0.5);
  bool rl_identity = true;
  for (std::size_t k = 0; k < rl.size(); ++k) rl_identity = rl_identity && rl[k] == (*noise.brownian)[k] - (*noise.brownian)[0];

  const ProbePoint probes[] = {{0.0, 0.25}, {0.5, 0.5}, {2.0, 1.0}, {10.0, 3.0}};
  const AdmissibilityReport adm = admissibility_check(noise, 1.0, 1.0, 0.5, 0.1, 0.0, 0.0, probes);

  return {{"applies", true},
          {"kernel_G_zero", kernel_zero},
          {"past_process_zero", past_zero},
          {"riemann_liouville_is_brownian", rl_identity},
          {"admissibility_remote", adm.remote},
          {"admissibility_recent", adm.recent},
          {"ok", kernel_zero && past_zero && rl_identity && adm.remote == 0.0 && adm.recent == 0.0}};
}

}  // namespace

ConstantsResult run_constants(double gamma, double H, std::optional<double> alpha, double kappa,
                              const Stage2Options& opt) {
  const double a = alpha.value_or(0.5 * (1.5 * kappa + H + 1.0 / (1.0 - gamma)));
  ConstantsResult r;
  r.ledger = solve_stage2(solve_fixed(gamma, H, a, kappa), opt);
  r.report = verify_ledger(r.ledger, gamma, H);
  return r;
}

std::string format_report(const VerificationReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %14s %14s %14s  %s\n", "relation", "lhs", "rhs", "slack", "ok");
  out += line;
  for (const Relation& r : report.relations) {
    std::snprintf(line, sizeof line, "%-22s %14.6g %14.6g %14.6g  %s%s%s\n", r.name.c_str(), r.lhs, r.rhs, r.slack,
                  r.ok ? "yes" : "NO", r.note.empty() ? "" : "  ", r.note.c_str());
    out += line;
  }
  out += report.ok ? "all relations hold\n" : "some relations FAIL\n";
  return out;
}

json run_fbm_test(const FbmTestOptions& opt) {
  if (!(opt.hurst > 0.0 && opt.hurst < 1.0)) throw ConfigError("hurst", "must lie in (0, 1)");
  if (opt.n < 2 || !std::has_single_bit(opt.n)) throw ConfigError("n", "must be a power of two >= 2");
  if (opt.n > kMaxCovarianceSteps)
    throw RefusalError("fbm-test: n exceeds the covariance check cap of " + std::to_string(kMaxCovarianceSteps));
  if (opt.samples < 2 || opt.samples > kMaxSamples)
    throw RefusalError("fbm-test: samples must lie in [2, " + std::to_string(kMaxSamples) + "]");
  if (opt.ks_samples < 10) throw ConfigError("ks_samples", "must be >= 10");

  return {{"hurst", opt.hurst},
          {"n", opt.n},
          {"samples", opt.samples},
          {"seed", opt.seed},
          {"covariance", covariance_check(opt)},
          {"m_norm", m_norm_check(opt)},
          {"degeneracy", degeneracy_check(opt)},
          {"version", kVersion}};
}

}  // namespace fsel
