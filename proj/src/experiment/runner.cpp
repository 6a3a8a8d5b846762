#include "fsel/experiment/runner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fsel/common/error.h"
#include "fsel/common/parallel.h"
#include "fsel/common/rng.h"
#include "fsel/fbm/fbm_exact.h"
#include "fsel/fbm/noise.h"
#include "fsel/fbm/path_io.h"
#include "fsel/sde/integrate.h"
#include "fsel/selection/diagnostics.h"
#include "fsel/selection/estimate.h"
#include "fsel/stats/stats.h"

namespace fsel {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + file.string());
}

void write_json(const fs::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

std::string path_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "path_%06zu.bin", i);
  return buf;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

BatchResult run_batch(const ExperimentConfig& cfg, double epsilon, std::uint64_t stream, std::size_t workers,
                      const std::optional<fs::path>& path_dir) {
  BatchResult r;
  r.model = cfg.model;
  r.model.epsilon = epsilon;
  validate(r.model);
  r.transition = transition_point(r.model);
  const double t_eps = r.transition.t_eps;
  const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon_over_t_eps / cfg.dt_over_t_eps));
  r.grid = TimeGrid(0.0, cfg.dt_over_t_eps * t_eps, steps);
  r.upper_bound_tolerance = 10.0 * std::sqrt(r.grid.dt());

  const SelectionDetector detector(r.model, r.grid, cfg.alpha, cfg.selection);
  std::optional<FbmSampler> sampler;
  if (cfg.noise == NoiseMethod::exact) sampler.emplace(r.grid, r.model.hurst);
  const double history = cfg.history_over_t_eps * t_eps;

  r.records.resize(cfg.n_paths);
  parallel_for(cfg.n_paths, workers, [&](std::size_t i) {
    PathRecord& rec = r.records[i];
    rec.path_id = i;
    rec.seed = derive_seed(cfg.seed, stream, i);
    const NoiseBundle noise = sampler ? exact_bundle(*sampler, rec.seed)
                                      : volterra_bundle(r.grid, r.model.hurst, history, rec.seed);
    const Path x = integrate(r.model, noise, cfg.x0, cfg.scheme);
    rec.outcome = detector.detect(x);
    const UpperBoundReport ub = upper_bound_check(x, noise, r.model, r.upper_bound_tolerance);
    rec.max_excess = ub.max_excess;
    rec.upper_bound_ok = ub.ok;
    if (path_dir) save_path_binary(*path_dir / path_file_name(i), x);
  });
  return r;
}

json summarize(const BatchResult& batch) {
  const double t_eps = batch.transition.t_eps;
  const double x_eps = batch.transition.x_eps;
  const std::size_t n = batch.records.size();

  std::size_t n_plus = 0, n_minus = 0;
  std::vector<double> psi_scaled, psi;
  std::size_t max_count = 0, ub_ok = 0;
  double sum_count = 0.0, max_deficit = 0.0, max_excess = -std::numeric_limits<double>::infinity();
  for (const PathRecord& rec : batch.records) {
    const SelectionOutcome& o = rec.outcome;
    if (o.sign == Selected::plus) ++n_plus;
    if (o.sign == Selected::minus) ++n_minus;
    if (o.sign != Selected::undecided) {
      psi.push_back(o.psi_hat);
      psi_scaled.push_back(o.psi_hat / t_eps);
    }
    max_count = std::max(max_count, o.violations.size());
    sum_count += static_cast<double>(o.violations.size());
    for (const Violation& v : o.violations) max_deficit = std::max(max_deficit, v.deficit);
    if (rec.upper_bound_ok) ++ub_ok;
    max_excess = std::max(max_excess, rec.max_excess);
  }
  const std::size_t decided = n_plus + n_minus;
  const double total = static_cast<double>(n);

  json s;
  s["epsilon"] = batch.model.epsilon;
  s["t_eps"] = t_eps;
  s["x_eps"] = x_eps;
  s["dt"] = batch.grid.dt();
  s["steps"] = batch.grid.steps();
  s["n_paths"] = n;
  s["counts"] = {{"plus", n_plus}, {"minus", n_minus}, {"undecided", n - decided}};
  s["p_plus"] = static_cast<double>(n_plus) / total;
  s["p_minus"] = static_cast<double>(n_minus) / total;
  s["undecided"] = static_cast<double>(n - decided) / total;
  s["decided_fraction"] = static_cast<double>(decided) / total;
  if (decided > 0) {
    const stats::Interval ci = stats::wilson_interval(n_plus, decided, 1.96);
    s["p_plus_decided"] = static_cast<double>(n_plus) / static_cast<double>(decided);
    s["p_plus_decided_ci95"] = {ci.lo, ci.hi};
    s["psi_over_t_eps"] = {{"q10", stats::quantile(psi_scaled, 0.10)},
                           {"q25", stats::quantile(psi_scaled, 0.25)},
                           {"median", stats::quantile(psi_scaled, 0.50)},
                           {"q75", stats::quantile(psi_scaled, 0.75)},
                           {"q90", stats::quantile(psi_scaled, 0.90)},
                           {"mean", stats::mean(psi_scaled)}};
  } else {
    s["p_plus_decided"] = nullptr;
    s["p_plus_decided_ci95"] = nullptr;
    s["psi_over_t_eps"] = nullptr;
  }
  s["violations"] = {{"mean_count", n ? sum_count / total : 0.0},
                     {"max_count", max_count},
                     {"max_deficit_over_x_eps", max_deficit / x_eps}};
  s["upper_bound"] = {{"window_end", std::min(batch.grid.t0() + 1.0, batch.grid.end())},
                      {"tolerance", batch.upper_bound_tolerance},
                      {"n_ok", ub_ok},
                      {"max_excess", number_or_null(max_excess)}};

  json tail;
  try {
    const TailFit fit = tail_fit(psi, t_eps, tail_z_grid(psi_scaled));
    tail = {{"kappa_hat", fit.kappa_hat},
            {"intercept", fit.intercept},
            {"scale", fit.scale},
            {"r_squared", fit.r_squared},
            {"points", fit.z_grid.size()}};
  } catch (const RefusalError& e) {
    tail = {{"kappa_hat", nullptr}, {"r_squared", nullptr}, {"refused", e.what()}};
  }
  s["tail_fit"] = tail;
  return s;
}

void write_outcomes_csv(const fs::path& file, const BatchResult& batch) {
  std::string out = "path_id,seed,sign,psi_hat,n_violations,max_excess\n";
  for (const PathRecord& rec : batch.records) {
    out += std::to_string(rec.path_id) + ',' + std::to_string(rec.seed) + ',' + to_string(rec.outcome.sign) + ',' +
           fmt(rec.outcome.psi_hat) + ',' + std::to_string(rec.outcome.violations.size()) + ',' +
           fmt(rec.max_excess) + '\n';
  }
  write_text(file, out);
}

void prepare_output_dir(const fs::path& out, bool force) {
  if (out.empty()) throw ConfigError("--out", "output directory is required");
  if (fs::exists(out)) {
    if (!force) throw ConfigError("--out", out.string() + " already exists (use --force to overwrite)");
    if (!fs::is_directory(out)) throw ConfigError("--out", out.string() + " is not a directory");
    fs::remove_all(out);
  }
  fs::create_directories(out);
}

json manifest(const ExperimentConfig& cfg, const std::string& command) {
  return {{"command", command}, {"config", to_json(cfg)}, {"config_hash", config_hash(cfg)}, {"version", kVersion}};
}

json run_simulate(const ExperimentConfig& cfg, const RunOptions& opt) {
  prepare_output_dir(opt.out, opt.force);
  std::optional<fs::path> path_dir;
  if (cfg.save_paths) {
    path_dir = opt.out / "paths";
    fs::create_directories(*path_dir);
  }
  const BatchResult batch = run_batch(cfg, cfg.model.epsilon, 0, opt.workers, path_dir);
  write_outcomes_csv(opt.out / "outcomes.csv", batch);
  json summary = summarize(batch);
  summary["config_hash"] = config_hash(cfg);
  summary["version"] = kVersion;
  write_json(opt.out / "summary.json", summary);
  write_json(opt.out / "manifest.json", manifest(cfg, "simulate"));
  return summary;
}

json run_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (cfg.epsilons.size() < 2) throw ConfigError("epsilons", "a sweep needs at least two values");
  prepare_output_dir(opt.out, opt.force);

  std::string csv =
      "epsilon,t_eps,x_eps,n_paths,p_plus,p_minus,undecided,decided_fraction,p_plus_decided,"
      "psi_q10,psi_q25,psi_median,psi_q75,psi_q90,kappa_hat,tail_r2\n";
  json rows = json::array();
  for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
    std::optional<fs::path> path_dir;
    if (cfg.save_paths) {
      path_dir = opt.out / ("paths_eps" + std::to_string(k));
      fs::create_directories(*path_dir);
    }
    const BatchResult batch = run_batch(cfg, cfg.epsilons[k], k, opt.workers, path_dir);
    write_outcomes_csv(opt.out / ("outcomes_eps" + std::to_string(k) + ".csv"), batch);
    const json s = summarize(batch);

    auto value = [](const json& j) { return j.is_number() ? fmt(j.get<double>()) : std::string("nan"); };
    const json& q = s["psi_over_t_eps"];
    auto quant = [&](const char* key) { return q.is_null() ? std::string("nan") : value(q[key]); };
    csv += fmt(batch.model.epsilon) + ',' + fmt(batch.transition.t_eps) + ',' + fmt(batch.transition.x_eps) + ',' +
           std::to_string(batch.records.size()) + ',' + value(s["p_plus"]) + ',' + value(s["p_minus"]) + ',' +
           value(s["undecided"]) + ',' + value(s["decided_fraction"]) + ',' + value(s["p_plus_decided"]) + ',' +
           quant("q10") + ',' + quant("q25") + ',' + quant("median") + ',' + quant("q75") + ',' + quant("q90") +
           ',' + value(s["tail_fit"]["kappa_hat"]) + ',' + value(s["tail_fit"]["r_squared"]) + '\n';
    rows.push_back(s);
  }
  write_text(opt.out / "sweep.csv", csv);
  const json summary = {{"config_hash", config_hash(cfg)}, {"version", kVersion}, {"rows", rows}};
  write_json(opt.out / "summary.json", summary);
  write_json(opt.out / "manifest.json", manifest(cfg, "sweep"));
  return summary;
}

}  // namespace fsel
