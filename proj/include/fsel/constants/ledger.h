#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fsel {

/// First group of constants: sigma, xi from alpha; theta, mu_g from kappa;
/// and the largest delta the first group tolerates.
struct FixedConstants {
  double gamma = 0.0;
  double hurst = 0.5;
  double alpha = 0.0;
  double kappa = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
  double theta = 0.0;
  double mu_g = 0.0;
  double delta = 0.0;
};

/// Inputs for the second group that the theory leaves unspecified.
struct Stage2Options {
  double a_plus = 1.0;
  double a_minus = 1.0;
  double C_B = 1.0;     // girsanov_proba prefactor
  double C_G = 1.0;     // girsanov_proba tail constant
  double lambda = 1.0;  // girsanov_proba tail rate
  double K_ell = 1.0;   // constant in front of C_W^{-ell}
  double K_gamma = 1.0; // q range for gamma >= 0 is (1, 1 + 1/(2 K_gamma))
  std::optional<double> vartheta;
};

struct ConstantsLedger {
  double gamma = 0.0;
  double hurst = 0.5;
  double alpha = 0.0;
  double kappa = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
  double theta = 0.0;
  double mu_g = 0.0;
  double delta = 0.0;
  double t_e = 0.0;
  double c_Af = 0.0;
  double c_Ac = 1.0;
  double U = 0.0;
  double vartheta = 0.0;
  double C_W = 1.0;
  double beta = 0.0;
  double q = 0.0;
  double K_A = 0.0;
  double t_star = 0.0;
  double ell = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  Stage2Options options;
};

/// One displayed relation evaluated numerically. slack > 0 means satisfied
/// with room (slack == 0 satisfies a non-strict relation only).
struct Relation {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool ok = false;
  std::string note;
};

struct VerificationReport {
  std::vector<Relation> relations;
  bool ok = false;
  const Relation* find(const std::string& name) const;
};

nlohmann::json to_json(const ConstantsLedger& l);
ConstantsLedger ledger_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VerificationReport& r);

}  // namespace fsel
