#include "fsel/constants/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fsel/common/error.h"

namespace fsel {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

// ln(1 + e^x) without overflow.
double log1p_exp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct Stage2Frame {
  FixedConstants f;
  Stage2Options opt;
  double vartheta, beta, q, K_A, U, delta_cap, delta_girsanov;
};

struct Candidate {
  ConstantsLedger l;
  std::vector<std::string> failing;
};

Candidate evaluate_at(const Stage2Frame& fr, double L) {
  const auto& f = fr.f;
  const double H = f.hurst, sg = f.sigma, th = fr.vartheta;
  ConstantsLedger l;
  l.gamma = f.gamma;
  l.hurst = H;
  l.alpha = f.alpha;
  l.kappa = f.kappa;
  l.sigma = sg;
  l.xi = f.xi;
  l.theta = f.theta;
  l.mu_g = f.mu_g;
  l.vartheta = th;
  l.beta = fr.beta;
  l.q = fr.q;
  l.K_A = fr.K_A;
  l.U = fr.U;
  l.c_Ac = 1.0;
  l.options = fr.opt;
  l.options.vartheta = th;

  const double d = std::min(fr.delta_cap, 0.5 * H * kLn2 / (10.0 * th * L));
  l.delta = d;
  const double ln_te = -(L - std::log(fr.U)) / (0.5 + d);
  l.t_e = std::exp(ln_te);
  const double ln_ts = th * L;
  l.t_star = std::exp(ln_ts);
  const double ln_1ts = log1p_exp(ln_ts);
  const double ln_third = std::log(fr.K_A / 3.0);
  const double ln_caf = std::log(0.5) + std::min((H + d - sg) * ln_1ts, ln_third);
  l.c_Af = std::exp(ln_caf);
  const double gap = sg - H - 2.0 * d;
  l.xi2 = 1.0 / (f.mu_g * gap);
  l.xi1 = 1.0 - f.xi - l.xi2;
  l.ell = l.xi1 * gap;

  std::vector<std::string> bad;
  double ln_cw = std::numeric_limits<double>::infinity();
  if (l.ell > 0.0) ln_cw = std::log(2.0) + std::max(0.0, (std::log(fr.opt.K_ell) - ln_caf) / l.ell);
  l.C_W = std::exp(ln_cw);
  if (!std::isfinite(l.C_W)) bad.push_back("ell");

  if (!(ln_te < 0.0)) bad.push_back("range_t_e");
  if (!std::isfinite(l.t_star)) bad.push_back("ca_tstar");
  if (!(10.0 * d / H * ln_ts < kLn2)) bad.push_back("ca_tstar_small");
  if (!(L * (1.0 + th * (H - 0.5 - fr.beta)) < ln_third)) bad.push_back("teu_first");
  if (!(-th * (0.5 - 3.0 * d) * std::log(fr.U) - 3.0 * d * (0.5 + d) * ln_ts < ln_third)) bad.push_back("teu_second");

  // vartheta_lower, with the leading power handled in log space.
  const double lead = -(0.5 + d) * (1.0 + th * (H - 0.5)) * ln_te + th * (H - 0.5) * std::log(fr.U);
  const double target = std::pow(5.0, 1.0 / (f.alpha * (1.0 - f.gamma)));
  const bool vl = lead > 700.0 || std::exp(lead) - std::exp(H * ln_te) > target;
  if (!vl) bad.push_back("vartheta_lower");

  // girsanov_proba: ln(C_B 12 (U-1)) - ln(t_e)/2 - t_e^{-1-2d} > ln C_G - 9 lambda t_e^{-1-2d'}
  const double a1 = -(1.0 + 2.0 * d) * ln_te;
  const double a2 = -(1.0 + 2.0 * fr.delta_girsanov) * ln_te;
  const double left = std::log(fr.opt.C_B * 12.0 * (fr.U - 1.0)) - 0.5 * ln_te - std::exp(std::min(a1, 700.0));
  const double right = std::log(fr.opt.C_G) - 9.0 * fr.opt.lambda * std::exp(std::min(a2, 700.0));
  if (!(left > right)) bad.push_back("girsanov_proba");

  const double A = std::max({1.0, fr.opt.a_plus, fr.opt.a_minus});
  const double esc_rhs = std::min(0.25, std::pow(8.0, -f.gamma));
  if (!(std::log(A) + (std::min(H, 0.5) + d) * ln_te <= std::log(esc_rhs))) bad.push_back("escape_te");

  return {l, bad};
}

}  // namespace

FixedConstants solve_fixed(double gamma, double H, double alpha, double kappa) {
  std::vector<std::string> bad;
  if (!(H > 0.0 && H < 1.0)) bad.push_back("hurst in (0,1)");
  if (!(gamma < 1.0)) bad.push_back("gamma < 1");
  if (bad.empty() && !(gamma > 1.0 - 1.0 / (2.0 * H))) bad.push_back("gamma > 1 - 1/(2H)");
  if (!(kappa > 0.0 && kappa < 1.0)) bad.push_back("0 < kappa < 1");
  if (bad.empty() && !(1.5 * kappa + H < alpha)) bad.push_back("3/2 kappa + H < alpha");
  if (bad.empty() && !(alpha < 1.0 / (1.0 - gamma))) bad.push_back("alpha < 1/(1-gamma)");
  if (!bad.empty()) {
    std::string msg = "solve_fixed: infeasible input, violated:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw InfeasibleError(msg, bad);
  }

  FixedConstants f;
  f.gamma = gamma;
  f.hurst = H;
  f.alpha = alpha;
  f.kappa = kappa;
  f.sigma = 1.0;
  f.xi = (f.sigma - alpha) / (f.sigma - H);
  const double r_lo = std::max(kappa, 1.5 * kappa / (alpha - H));
  const double r = 0.5 * (r_lo + 1.0);
  f.theta = r / kappa - 1.0;
  f.mu_g = 2.0 * r / kappa;
  const double S = 1.0 / (1.0 + f.theta) + 1.0 / f.mu_g;
  f.delta = 0.25 * (f.sigma - H) * (1.0 - S / (alpha - H));
  return f;
}

ConstantsLedger solve_stage2(const FixedConstants& f, const Stage2Options& opt) {
  const double H = f.hurst, g = f.gamma, sg = f.sigma;
  const double th_lo = 1.0 / (sg - H + 0.5);
  const double th = opt.vartheta.value_or(0.5 * (th_lo + 2.0));
  if (!(th < 2.0)) throw InfeasibleError("solve_stage2: vartheta must be < 2", {"range_vartheta"});
  if (!(th > th_lo))
    throw InfeasibleError("solve_stage2: vartheta must exceed 1/(sigma - H + 1/2) so that beta exists",
                          {"beta_lower"});

  Stage2Frame fr{f, opt, th, 0, 0, 0, 0, 0, 0};
  fr.beta = 0.5 * (std::max(H, 1.0 / th + H - 0.5) + sg);
  fr.q = g < 0.0 ? 0.5 * (std::pow(2.0, 1.0 / f.alpha) + std::pow(5.0, 1.0 / f.alpha))
                 : 1.0 + 1.0 / (4.0 * opt.K_gamma);
  const double c_ag = f.alpha * (1.0 - g) / (1.0 + f.alpha * (g - 1.0));
  auto K = [&](double A) {
    return std::pow(fr.q, -f.alpha) *
           std::min(std::pow(5.0, -1.0 / (f.alpha * (1.0 - g))),
                    std::pow(A, f.alpha) * std::pow(1.0 + c_ag, 1.0 / (1.0 - g))) /
           3.0;
  };
  fr.K_A = std::min(K(opt.a_plus), K(opt.a_minus));
  fr.delta_girsanov = 0.5 + H * (g - 1.0);
  fr.delta_cap = std::min({f.delta, 0.5 * fr.delta_girsanov, 1.0 / 12.0});
  fr.U = std::max({std::pow(1.5, 2.0 / th), 2.5,
                   1.5 * std::pow(3.0 / fr.K_A, 1.0 / (th * (0.5 - 3.0 * fr.delta_cap)))});

  const double e1 = th * (fr.beta + 0.5 - H) - 1.0;
  const double L_min = std::max(std::log(fr.U) * (1.0 + 1e-9), std::log(3.0 / fr.K_A) / e1 * (1.0 + 1e-9));
  const double L_max = 700.0 / th;
  if (!(L_min < L_max)) throw InfeasibleError("solve_stage2: scale range is empty", {"teu_first"});

  // Grow L until every relation holds, then bisect back to the smallest
  // feasible L found.
  double lo = L_min, hi = L_min;
  Candidate c = evaluate_at(fr, hi);
  while (!c.failing.empty()) {
    lo = hi;
    hi = std::min(L_max, hi * 1.5);
    c = evaluate_at(fr, hi);
    if (hi >= L_max) break;
  }
  if (!c.failing.empty()) {
    std::string msg = "solve_stage2: no feasible scale, binding:";
    for (const auto& b : c.failing) msg += " [" + b + "]";
    throw InfeasibleError(msg, c.failing);
  }
  if (lo < hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      Candidate m = evaluate_at(fr, mid);
      if (m.failing.empty()) {
        hi = mid;
        c = std::move(m);
      } else {
        lo = mid;
      }
    }
  }
  return c.l;
}

ClosedFormTe closed_form_te(double H, double alpha, double vartheta, double delta, double beta) {
  const double U = std::pow(1.5, 2.0 / vartheta);
  const double a = std::pow(std::pow(5.0, 1.0 / alpha) * std::pow(1.5, 1.0 - 2.0 * H),
                            1.0 / (vartheta * (H + delta) * (0.5 + delta)));
  const double b = std::pow(3.0, 1.0 / (vartheta * (H - 0.5 - beta) + 1.0));
  return {U, 1.0 / std::max(a, b)};
}

}  // namespace fsel
