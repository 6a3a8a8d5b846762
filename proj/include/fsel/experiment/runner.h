#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsel/constants/ledger.h"
#include "fsel/experiment/config.h"
#include "fsel/fbm/grid.h"
#include "fsel/flow/flow.h"
#include "fsel/selection/detect.h"

namespace fsel {

struct PathRecord {
  std::size_t path_id = 0;
  std::uint64_t seed = 0;
  SelectionOutcome outcome;
  double max_excess = 0.0;
  bool upper_bound_ok = true;
};

struct BatchResult {
  ModelParams model;
  TransitionPoint transition;
  TimeGrid grid;
  double upper_bound_tolerance = 0.0;
  std::vector<PathRecord> records;
};

/// Simulates cfg.n_paths paths at the given epsilon (overriding
/// cfg.model.epsilon). Path i uses derive_seed(cfg.seed, stream, i), so the
/// result does not depend on `workers`. When path_dir is set, each solution
/// is saved there as path_NNNNNN.bin.
BatchResult run_batch(const ExperimentConfig& cfg, double epsilon, std::uint64_t stream, std::size_t workers,
                      const std::optional<std::filesystem::path>& path_dir = std::nullopt);

/// Aggregate statistics of one batch (probabilities, psi quantiles in units
/// of t_eps, violation and upper-bound stats, tail fit when possible).
nlohmann::json summarize(const BatchResult& batch);

void write_outcomes_csv(const std::filesystem::path& file, const BatchResult& batch);

struct RunOptions {
  std::filesystem::path out;
  std::size_t workers = 1;
  bool force = false;
};

/// Creates `out`; an existing directory is a ConfigError unless force is set,
/// in which case it is emptied first.
void prepare_output_dir(const std::filesystem::path& out, bool force);

/// Writes outcomes.csv, summary.json, manifest.json and, if requested,
/// paths/. Returns the summary.
nlohmann::json run_simulate(const ExperimentConfig& cfg, const RunOptions& opt);

/// One batch per cfg.epsilons[k] with seed stream k. Writes sweep.csv,
/// outcomes_eps<k>.csv, summary.json and manifest.json.
nlohmann::json run_sweep(const ExperimentConfig& cfg, const RunOptions& opt);

nlohmann::json manifest(const ExperimentConfig& cfg, const std::string& command);

struct ConstantsResult {
  ConstantsLedger ledger;
  VerificationReport report;
};

/// alpha defaults to the middle of (3/2 kappa + H, 1/(1-gamma)).
ConstantsResult run_constants(double gamma, double H, std::optional<double> alpha, double kappa,
                              const Stage2Options& opt = {});

/// Relation table with slacks, one row per relation.
std::string format_report(const VerificationReport& report);

struct FbmTestOptions {
  double hurst = 0.5;
  std::size_t n = 512;  // steps on [0, 1], power of two
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t ks_samples = 2000;
  double delta = 0.1;
};

/// Covariance of the exact generator against R(s,t) with per-entry standard
/// errors, a KS comparison of M(0,1) and M(0,4) (equal in law by Brownian
/// scaling), and at H = 1/2 the exact-zero degeneracy checks.
nlohmann::json run_fbm_test(const FbmTestOptions& opt);

}  // namespace fsel
