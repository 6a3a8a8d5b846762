#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsel/common/error.h"
#include "fsel/experiment/config.h"
#include "fsel/experiment/runner.h"
#include "fsel/flow/flow.h"

namespace fsel {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json minimal() {
  return json::parse(R"({"model": {"gamma": 0.5, "hurst": 0.5, "epsilon": 0.1}, "n_paths": 10, "seed": 3})");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("fsel_" + name);
  fs::remove_all(p);
  return p;
}

std::string field_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(Config, DefaultsAreResolved) {
  const ExperimentConfig c = parse_config(minimal());
  EXPECT_DOUBLE_EQ(c.alpha, 0.5 * (0.5 + 2.0));
  EXPECT_EQ(c.scheme, Scheme::flow_splitting);
  const json r = to_json(c);
  EXPECT_EQ(r["grid"]["dt_over_t_eps"], 1e-3);
  EXPECT_EQ(r["selection"]["margin_mode"], "paper");
  EXPECT_EQ(r["noise"]["method"], "exact");
  // The resolved form parses back to itself.
  EXPECT_EQ(to_json(parse_config(r)), r);
  EXPECT_EQ(config_hash(parse_config(r)), config_hash(c));
}

TEST(Config, ErrorsCarryFieldPath) {
  json j = minimal();
  j["model"]["hurst"] = "x";
  EXPECT_EQ(field_of(j), "model.hurst");
  j = minimal();
  j["model"].erase("epsilon");
  EXPECT_EQ(field_of(j), "model.epsilon");
  j = minimal();
  j["selection"] = {{"margin_mode", "loose"}};
  EXPECT_EQ(field_of(j), "selection.margin_mode");
  j = minimal();
  j["epsilons"] = {0.1, -1.0};
  EXPECT_EQ(field_of(j), "epsilons[1]");
  j = minimal();
  j["grid"] = {{"horizon_over_t_eps", 5}};
  EXPECT_EQ(field_of(j), "grid.horizon_over_t_eps");
  j = minimal();
  j["colour"] = "blue";
  EXPECT_EQ(field_of(j), "colour");
  j = minimal();
  j["model"]["gamma"] = 1.5;
  EXPECT_EQ(field_of(j), "model");
  j = minimal();
  j["schema_version"] = 9;
  EXPECT_EQ(field_of(j), "schema_version");
}

TEST(Config, ManifestIsAcceptedAndChecked) {
  const ExperimentConfig c = parse_config(minimal());
  json m = manifest(c, "simulate");
  EXPECT_EQ(config_hash(parse_config(m)), config_hash(c));
  m["config"]["seed"] = 4;
  EXPECT_EQ(field_of(m), "config_hash");
}

TEST(Simulate, WritesArtifactsAndPartitions) {
  ExperimentConfig c = parse_config(minimal());
  c.save_paths = true;
  const fs::path out = scratch("sim");
  const json s = run_simulate(c, {out, 1, false});
  for (const char* f : {"outcomes.csv", "summary.json", "manifest.json"}) EXPECT_TRUE(fs::exists(out / f)) << f;
  EXPECT_EQ(std::distance(fs::directory_iterator(out / "paths"), fs::directory_iterator{}), 10);
  EXPECT_NEAR(s["p_plus"].get<double>() + s["p_minus"].get<double>() + s["undecided"].get<double>(), 1.0, 1e-15);
  EXPECT_EQ(s["config_hash"], config_hash(c));
  EXPECT_EQ(s["version"], kVersion);

  std::istringstream csv(slurp(out / "outcomes.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "path_id,seed,sign,psi_hat,n_violations,max_excess");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 10);

  EXPECT_THROW(run_simulate(c, {out, 1, false}), ConfigError);
  EXPECT_NO_THROW(run_simulate(c, {out, 1, true}));
}

TEST(Simulate, IndependentOfWorkersAndRerunnableFromManifest) {
  ExperimentConfig c = parse_config(minimal());
  c.n_paths = 40;
  c.save_paths = true;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run_simulate(c, {a, 1, false});
  run_simulate(load_config(a / "manifest.json"), {b, 3, false});
  for (const char* f : {"outcomes.csv", "summary.json", "manifest.json", "paths/path_000039.bin"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Sweep, OneRowPerEpsilon) {
  json j = minimal();
  j["epsilons"] = {0.1, 0.05};
  j["n_paths"] = 20;
  const ExperimentConfig c = parse_config(j);
  const fs::path out = scratch("sweep");
  const json s = run_sweep(c, {out, 2, false});
  ASSERT_EQ(s["rows"].size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto tp = transition_point({0.5, 0.5, 1, 1, c.epsilons[k]});
    EXPECT_DOUBLE_EQ(s["rows"][k]["t_eps"].get<double>(), tp.t_eps);
    EXPECT_TRUE(fs::exists(out / ("outcomes_eps" + std::to_string(k) + ".csv")));
  }
  std::istringstream csv(slurp(out / "sweep.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 2);

  ExperimentConfig one = c;
  one.epsilons = {0.1};
  EXPECT_THROW(run_sweep(one, {scratch("sweep1"), 1, false}), ConfigError);
}

TEST(Constants, TableAndInfeasibleInputs) {
  const auto r = run_constants(0.5, 0.5, std::nullopt, 0.2);
  EXPECT_TRUE(r.report.ok);
  const std::string table = format_report(r.report);
  EXPECT_NE(table.find("vartheta_lower"), std::string::npos);
  EXPECT_NE(table.find("slack"), std::string::npos);
  EXPECT_THROW(run_constants(0.5, 0.5, 0.6, 0.2), InfeasibleError);
}

TEST(FbmTest, DegeneracyAndCovariance) {
  FbmTestOptions o;
  o.n = 64;
  o.samples = 10000;
  o.ks_samples = 300;
  const json half = run_fbm_test(o);
  EXPECT_TRUE(half["degeneracy"]["ok"].get<bool>());
  EXPECT_EQ(half["degeneracy"]["admissibility_remote"], 0.0);

  o.hurst = 0.7;
  const json rough = run_fbm_test(o);
  EXPECT_FALSE(rough["degeneracy"]["applies"].get<bool>());
  EXPECT_TRUE(rough["covariance"]["within_4se"].get<bool>());
  EXPECT_EQ(run_fbm_test(o).dump(), rough.dump());

  o.n = 100;
  EXPECT_THROW(run_fbm_test(o), ConfigError);
  o.n = 8192;
  EXPECT_THROW(run_fbm_test(o), RefusalError);
}

}  // namespace
}  // namespace fsel
