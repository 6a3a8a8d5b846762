// fsel: command-line front end for the selection experiments.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fsel/common/error.h"
#include "fsel/common/parallel.h"
#include "fsel/constants/verify.h"
#include "fsel/experiment/config.h"
#include "fsel/experiment/runner.h"

namespace {

enum Exit { kOk = 0, kConfig = 2, kInfeasible = 3, kNumeric = 4 };

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  bool force = false;
  bool save_paths = false;
};

fsel::ExperimentConfig resolved(const Common& c) {
  fsel::ExperimentConfig cfg = fsel::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.save_paths) cfg.save_paths = true;
  return cfg;
}

void write_or_print(const std::string& out, const nlohmann::json& j) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw fsel::ConfigError("--out", "cannot write " + out);
  f << j.dump(2) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Zero-noise selection experiments for SDEs with power-law drift"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fsel::kVersion);

  Common sim, sweep;
  auto add_common = [](CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON config or manifest")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory")->required();
    cmd->add_option("--seed", c.seed, "Override the master seed");
    cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
    cmd->add_flag("--force", c.force, "Overwrite an existing output directory");
    cmd->add_flag("--save-paths", c.save_paths, "Store every solution path");
  };
  auto* simulate = app.add_subcommand("simulate", "Run one batch at a single epsilon");
  add_common(simulate, sim);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one batch per epsilon in the config");
  add_common(sweep_cmd, sweep);

  double gamma = 0.5, hurst = 0.5, kappa = 0.1;
  std::optional<double> alpha, vartheta;
  fsel::Stage2Options s2;
  std::string const_out, verify_path;
  auto* constants = app.add_subcommand("constants", "Solve and verify the constants ledger");
  constants->add_option("--gamma", gamma, "Drift exponent");
  constants->add_option("--hurst", hurst, "Hurst index");
  constants->add_option("--alpha", alpha, "Envelope exponent (default mid-range)");
  constants->add_option("--kappa", kappa, "Tail exponent");
  constants->add_option("--a-plus", s2.a_plus);
  constants->add_option("--a-minus", s2.a_minus);
  constants->add_option("--vartheta", vartheta);
  constants->add_option("--out", const_out, "Write the ledger JSON here instead of stdout");
  constants->add_option("--verify", verify_path, "Verify an existing ledger JSON")->check(CLI::ExistingFile);

  fsel::FbmTestOptions fbm;
  std::string fbm_out;
  auto* fbm_test = app.add_subcommand("fbm-test", "Check the fBm generator");
  fbm_test->add_option("--hurst", fbm.hurst);
  fbm_test->add_option("--n", fbm.n, "Steps on [0, 1], power of two");
  fbm_test->add_option("--samples", fbm.samples);
  fbm_test->add_option("--ks-samples", fbm.ks_samples);
  fbm_test->add_option("--seed", fbm.seed);
  fbm_test->add_option("--workers", fbm.workers);
  fbm_test->add_option("--out", fbm_out, "Write diagnostics JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (simulate->parsed()) {
    const auto summary = fsel::run_simulate(resolved(sim), {sim.out, fsel::resolve_workers(sim.workers), sim.force});
    std::printf("decided %.4f  p_plus %.4f  p_minus %.4f  -> %s\n", summary["decided_fraction"].get<double>(),
                summary["p_plus"].get<double>(), summary["p_minus"].get<double>(), sim.out.c_str());
    return kOk;
  }
  if (sweep_cmd->parsed()) {
    const auto summary = fsel::run_sweep(resolved(sweep), {sweep.out, fsel::resolve_workers(sweep.workers), sweep.force});
    std::printf("%zu rows -> %s/sweep.csv\n", summary["rows"].size(), sweep.out.c_str());
    return kOk;
  }
  if (constants->parsed()) {
    if (!verify_path.empty()) {
      std::ifstream in(verify_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw fsel::ConfigError("--verify", e.what());
      }
      const auto ledger = fsel::ledger_from_json(j.contains("ledger") ? j["ledger"] : j);
      const auto report = fsel::verify_ledger(ledger, ledger.gamma, ledger.hurst);
      std::cout << fsel::format_report(report);
      return report.ok ? kOk : kInfeasible;
    }
    s2.vartheta = vartheta;
    const auto r = fsel::run_constants(gamma, hurst, alpha, kappa, s2);
    std::cerr << fsel::format_report(r.report);
    write_or_print(const_out, {{"ledger", fsel::to_json(r.ledger)}, {"verification", fsel::to_json(r.report)}});
    return r.report.ok ? kOk : kInfeasible;
  }
  if (fbm_test->parsed()) {
    fbm.workers = fsel::resolve_workers(fbm.workers);
    write_or_print(fbm_out, fsel::run_fbm_test(fbm));
    return kOk;
  }
  return kConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fsel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const fsel::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    for (const auto& b : e.binding()) std::cerr << "  binding: " << b << "\n";
    return kInfeasible;
  } catch (const fsel::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const fsel::RefusalError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kConfig;
  } catch (const fsel::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
