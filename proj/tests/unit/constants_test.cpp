#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fsel/common/error.h"
#include "fsel/constants/ledger.h"
#include "fsel/constants/solver.h"
#include "fsel/constants/verify.h"

namespace fsel {
namespace {

double mid_alpha(double gamma, double H, double kappa) { return 0.5 * (1.5 * kappa + H + 1.0 / (1.0 - gamma)); }

ConstantsLedger solve(double gamma, double H, double kappa) {
  return solve_stage2(solve_fixed(gamma, H, mid_alpha(gamma, H, kappa), kappa));
}

TEST(Fixed, DefiningRelations) {
  const double gamma = 0.5, H = 0.5, kappa = 0.2, alpha = mid_alpha(gamma, H, kappa);
  const FixedConstants f = solve_fixed(gamma, H, alpha, kappa);
  EXPECT_DOUBLE_EQ(f.sigma, 1.0);
  EXPECT_NEAR(alpha, f.sigma + f.xi * (H - f.sigma), 1e-14);
  EXPECT_GT(f.theta, 0.0);
  EXPECT_GT(f.mu_g, 1.0);
  EXPECT_LT(kappa * (1 + f.theta) / 1.0, 1.0 + 1e-15);
  EXPECT_GT(f.delta, 0.0);
}

TEST(Fixed, InfeasibleInputsNameTheirCause) {
  auto binding = [](auto&& call) -> std::vector<std::string> {
    try {
      call();
    } catch (const InfeasibleError& e) {
      return e.binding();
    }
    return {};
  };
  EXPECT_FALSE(binding([] { solve_fixed(0.5, 0.5, 0.6, 0.1); }).empty());   // alpha <= 3/2 kappa + H
  EXPECT_FALSE(binding([] { solve_fixed(0.5, 0.5, 2.5, 0.1); }).empty());   // alpha >= 1/(1-gamma)
  EXPECT_FALSE(binding([] { solve_fixed(0.5, 0.5, 1.9, 1.0); }).empty());   // kappa >= 1
  EXPECT_FALSE(binding([] { solve_fixed(0.0, 0.7, 0.95, 0.1); }).empty());  // gamma <= 1 - 1/(2H)
  EXPECT_THROW(solve_fixed(0.5, 0.5, 0.6, 0.1), InfeasibleError);
}

TEST(Fixed, ExampleLedgerAtAlpha12) {
  const FixedConstants f = solve_fixed(0.5, 0.5, 1.2, 0.1);
  EXPECT_NEAR(f.sigma + f.xi * (0.5 - f.sigma), 1.2, 1e-12);
  const ConstantsLedger l = solve_stage2(f);
  EXPECT_TRUE(verify_ledger(l, 0.5, 0.5).ok);
  // Re-verifying the unchanged ledger gives the same verdict.
  EXPECT_TRUE(verify_ledger(ledger_from_json(to_json(l)), 0.5, 0.5).ok);
}

class MidRange : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(MidRange, SolvedLedgerVerifies) {
  const auto [gamma, H] = GetParam();
  const double kappa = 0.5 * std::min(1.0, (2.0 / 3.0) * (1.0 / (1.0 - gamma) - H));
  const ConstantsLedger l = solve(gamma, H, kappa);
  const VerificationReport r = verify_ledger(l, gamma, H);
  for (const Relation& rel : r.relations) EXPECT_TRUE(rel.ok) << rel.name << ": " << rel.lhs << " vs " << rel.rhs;
  EXPECT_TRUE(r.ok);
  EXPECT_NE(r.find("vartheta_lower"), nullptr);
}

INSTANTIATE_TEST_SUITE_P(Models, MidRange,
                         ::testing::Values(std::make_tuple(0.5, 0.5), std::make_tuple(-0.5, 0.3),
                                           std::make_tuple(0.5, 0.7), std::make_tuple(0.9, 0.2)));

TEST(Verify, PerturbationsAreCaught) {
  const ConstantsLedger base = solve(0.5, 0.5, 0.2);
  ASSERT_TRUE(verify_ledger(base, 0.5, 0.5).ok);

  ConstantsLedger l = base;
  l.t_e *= 2.0;
  EXPECT_FALSE(verify_ledger(l, 0.5, 0.5).ok);

  l = base;
  l.xi += 0.01;
  EXPECT_FALSE(verify_ledger(l, 0.5, 0.5).ok);

  l = base;
  l.vartheta = 2.0;
  EXPECT_FALSE(verify_ledger(l, 0.5, 0.5).ok);

  // A ledger for another model is rejected.
  EXPECT_FALSE(verify_ledger(base, 0.4, 0.5).ok);
}

TEST(Verify, JsonRoundTrip) {
  const ConstantsLedger l = solve(-0.5, 0.3, 0.1);
  const auto text = to_json(l).dump();
  const ConstantsLedger back = ledger_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back.t_e, l.t_e);
  EXPECT_EQ(back.U, l.U);
  EXPECT_EQ(back.C_W, l.C_W);
  EXPECT_EQ(back.options.a_plus, l.options.a_plus);
  EXPECT_TRUE(verify_ledger(back, -0.5, 0.3).ok);

  const auto report = to_json(verify_ledger(back, -0.5, 0.3));
  EXPECT_TRUE(report.at("ok").get<bool>());
  EXPECT_FALSE(report.at("relations").empty());
}

TEST(Stage2, VarthetaAtTwoIsInfeasible) {
  Stage2Options opt;
  opt.vartheta = 2.0;
  EXPECT_THROW(solve_stage2(solve_fixed(0.5, 0.5, 1.2, 0.2), opt), InfeasibleError);
}

TEST(KappaRegion, BisectionMeetsCeiling) {
  for (auto [gamma, H] : {std::pair{0.5, 0.5}, std::pair{-0.5, 0.3}}) {
    const double ceiling = std::min(1.0, (2.0 / 3.0) * (1.0 / (1.0 - gamma) - H));
    const double k = max_feasible_kappa(gamma, H);
    EXPECT_LE(k, ceiling + 1e-3);
    EXPECT_GE(k, ceiling - 1e-3);
  }
}

// M*(1/t_e, U) from its definition, for the explicit choice of U and t_e.
double m_star(double H, double d, double vartheta, double U, double t_e) {
  return std::pow(t_e, -(0.5 + d) * (1 + vartheta * (H - 0.5))) * std::pow(U, vartheta * (H - 0.5)) - std::pow(t_e, H);
}

TEST(ClosedForm, ValuesAndVarthetaLowerForNonPositiveGamma) {
  const double H = 0.3, gamma = -0.5, alpha = 0.55, vartheta = 1.5, d = 0.01, beta = 0.7;
  const auto cf = closed_form_te(H, alpha, vartheta, d, beta);
  EXPECT_NEAR(std::log(cf.U), 2.0 / vartheta * std::log(1.5), 1e-14);
  const double log_a = (std::log(5.0) / alpha + (1 - 2 * H) * std::log(1.5)) / (vartheta * (H + d) * (0.5 + d));
  const double log_b = std::log(3.0) / (vartheta * (H - 0.5 - beta) + 1);
  EXPECT_NEAR(-std::log(cf.t_e), std::max(log_a, log_b), 1e-12);
  EXPECT_GT(m_star(H, d, vartheta, cf.U, cf.t_e), std::pow(5.0, 1.0 / (alpha * (1 - gamma))));
}

// With gamma > 0 the explicit t_e uses 5^{1/alpha}, which is smaller than the
// required 5^{1/(alpha(1-gamma))}; at H = 1/2 the relation then fails.
TEST(ClosedForm, CanMissVarthetaLowerForPositiveGamma) {
  const double H = 0.5, gamma = 0.5, alpha = 1.25, vartheta = 1.5, d = 0.01, beta = 0.9;
  const auto cf = closed_form_te(H, alpha, vartheta, d, beta);
  EXPECT_LT(m_star(H, d, vartheta, cf.U, cf.t_e), std::pow(5.0, 1.0 / (alpha * (1 - gamma))));
}

}  // namespace
}  // namespace fsel
