#include "fsel/constants/verify.h"

#include <algorithm>
#include <cmath>

namespace fsel {
namespace {

// Relations are added with slack = rhs - lhs for "lhs < rhs" / "lhs <= rhs".
class Book {
 public:
  void less(const std::string& name, double lhs, double rhs, std::string note = {}) {
    add(name, lhs, rhs, rhs - lhs, rhs - lhs > 0.0, std::move(note));
  }
  void less_eq(const std::string& name, double lhs, double rhs, std::string note = {}) {
    add(name, lhs, rhs, rhs - lhs, rhs - lhs >= 0.0, std::move(note));
  }
  void close(const std::string& name, double lhs, double rhs, double rel_tol, std::string note = {}) {
    const double err = std::abs(lhs - rhs);
    const double allowed = rel_tol * std::max(1.0, std::abs(rhs));
    add(name, lhs, rhs, allowed - err, err <= allowed, std::move(note));
  }
  void flag(const std::string& name, bool ok, double lhs, double rhs, std::string note = {}) {
    add(name, lhs, rhs, ok ? 1.0 : -1.0, ok, std::move(note));
  }
  VerificationReport done() {
    r_.ok = std::all_of(r_.relations.begin(), r_.relations.end(), [](const Relation& x) { return x.ok; });
    return std::move(r_);
  }

 private:
  void add(const std::string& name, double lhs, double rhs, double slack, bool ok, std::string note) {
    if (!std::isfinite(lhs) && !std::isinf(lhs)) ok = false;
    if (std::isnan(slack)) ok = false;
    r_.relations.push_back({name, lhs, rhs, slack, ok, std::move(note)});
  }
  VerificationReport r_;
};

}  // namespace

const Relation* VerificationReport::find(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

VerificationReport verify_ledger(const ConstantsLedger& l, double gamma, double H) {
  Book b;
  const double al = l.alpha, ka = l.kappa, sg = l.sigma, xi = l.xi, d = l.delta;
  const auto& o = l.options;

  b.flag("ledger_matches_model", l.gamma == gamma && l.hurst == H, l.gamma, gamma,
         "ledger was produced for (gamma, H) = (" + std::to_string(l.gamma) + ", " + std::to_string(l.hurst) + ")");
  b.less("alpha_lower", 1.5 * ka + H, al, "3/2 kappa + H < alpha");
  b.less("alpha_upper", al, 1.0 / (1.0 - gamma), "alpha < 1/(1-gamma)");

  // First group.
  b.less("range_sigma_low", H, sg, "sigma in (H, 1]");
  b.less_eq("range_sigma_high", sg, 1.0, "sigma in (H, 1]");
  b.less("fixed_one", xi + (1.0 / (1.0 + l.theta) + 1.0 / l.mu_g) / (sg - H - 2.0 * d), 1.0);
  b.less("fixed_two_theta", (1.0 + l.theta) * ka, 1.0);
  b.less("fixed_two_mu", l.mu_g * ka, 2.0);
  b.close("nu_def", al, sg + xi * (H - sg), 1e-12, "alpha = sigma + xi (H - sigma)");
  b.less("theta_positive", 0.0, l.theta);
  b.less("mu_g_above_one", 1.0, l.mu_g);
  b.flag("xi_sign", true, xi, 0.0,
         xi > 0.0 ? "xi > 0"
                  : "xi <= 0: with sigma <= 1, alpha = sigma + xi (H - sigma) forces xi < 0 whenever alpha > 1");

  // Ranges of the second group.
  b.less("range_t_e_low", 0.0, l.t_e);
  b.less("range_t_e_high", l.t_e, 1.0);
  b.less("range_c_Af_low", 0.0, l.c_Af);
  b.less("range_c_Af_high", l.c_Af, 1.0);
  b.less("range_U", 2.0, l.U);
  b.less("range_vartheta_low", 0.0, l.vartheta);
  b.less("range_vartheta_high", l.vartheta, 2.0);
  b.less_eq("range_C_W", 1.0, l.C_W);
  b.less("range_beta_low", H, l.beta);
  b.less_eq("range_beta_high", l.beta, sg);
  b.less("range_delta", 0.0, d);
  b.less("beta_lower", 1.0 / l.vartheta + H - 0.5, l.beta, "beta > 1/vartheta + H - 1/2");

  // ca_tstar, in logs: ln c_Af + sigma ln(1+t*) <= (H+delta) ln(1+t*).
  const double ln_ts_def = l.vartheta * (std::log(l.U) - (0.5 + d) * std::log(l.t_e));
  b.close("ca_tstar_def", std::log(l.t_star), ln_ts_def, 1e-9, "t* = (U t_e^{-1/2-delta})^vartheta, in logs");
  const double ln1ts = std::log1p(l.t_star);
  b.less_eq("ca_tstar", std::log(l.c_Af) + sg * ln1ts, (H + d) * ln1ts, "in logs");
  b.less("ca_tstar_small", std::pow(l.t_star, 10.0 * d / H), 2.0);

  // teu
  const double third = l.K_A / 3.0;
  const double base = l.U * std::pow(l.t_e, -0.5 - d);
  b.less("teu_first", std::pow(base, 1.0 + l.vartheta * (H - 0.5 - l.beta)), third);
  b.less("teu_second", std::pow(l.U, -l.vartheta * (0.5 - 3.0 * d)) * std::pow(l.t_star, -3.0 * d * (0.5 + d)),
         third);
  b.less("teu_third", l.c_Af, third);

  // vartheta_lower
  const double Mstar = std::pow(l.t_e, -(0.5 + d) * (1.0 + l.vartheta * (H - 0.5))) *
                           std::pow(l.U, l.vartheta * (H - 0.5)) -
                       std::pow(l.t_e, H);
  b.less("vartheta_lower", std::pow(5.0, 1.0 / (al * (1.0 - gamma))), Mstar, "M*(1/t_e, U) > 5^{1/(alpha(1-gamma))}");

  // girsanov_proba, in logs: ln(first term) > ln(second term).
  const double dprime = 0.5 + H * (gamma - 1.0);
  const double g_first = std::log(o.C_B * 12.0 * (l.U - 1.0)) - 0.5 * std::log(l.t_e) - std::pow(l.t_e, -1.0 - 2.0 * d);
  const double g_second = std::log(o.C_G) - 9.0 * o.lambda * std::pow(l.t_e, -1.0 - 2.0 * dprime);
  b.less("girsanov_proba", g_second, g_first,
         "logs of both terms; C_G enters with the sign of this display, which differs from its use in the "
         "escape-probability lemma; conditional on C_B, C_G, lambda");
  b.less("delta_girsanov", d, dprime, "delta < 1/2 + H(gamma - 1)");

  // escape_te, A = max(A+, A-).
  const double A = std::max(o.a_plus, o.a_minus);
  b.less_eq("escape_te", std::max(1.0, A) * std::pow(l.t_e, std::min(H, 0.5) + d),
            std::min(0.25, std::pow(8.0, -gamma)), "exponent read as min(H, 1/2) + delta");

  // fixed_five
  if (gamma < 0.0) {
    b.less("fixed_five_low", std::pow(2.0, 1.0 / al), l.q);
    b.less("fixed_five_high", l.q, std::pow(5.0, 1.0 / al));
  } else {
    b.less("fixed_five_low", 1.0, l.q);
    b.less("fixed_five_high", l.q, 1.0 + 1.0 / (2.0 * o.K_gamma), "conditional on K_gamma");
  }

  // fixed_four
  const double cag = al * (1.0 - gamma) / (1.0 + al * (gamma - 1.0));
  const double Kp = std::pow(l.q, -al) *
                    std::min(std::pow(5.0, -1.0 / (al * (1.0 - gamma))),
                             std::pow(o.a_plus, al) * std::pow(1.0 + cag, 1.0 / (1.0 - gamma))) / 3.0;
  const double Km = std::pow(l.q, -al) *
                    std::min(std::pow(5.0, -1.0 / (al * (1.0 - gamma))),
                             std::pow(o.a_minus, al) * std::pow(1.0 + cag, 1.0 / (1.0 - gamma))) / 3.0;
  b.close("fixed_four", l.K_A, std::min(Kp, Km), 1e-12, "K_A = min(K(A+,1), K(A-,1))");
  b.less("K_A_below_one", l.K_A, 1.0);

  // ell
  const double gap = sg - H - 2.0 * d;
  const double xi2 = 1.0 / (l.mu_g * gap);
  const double xi1 = 1.0 - xi - xi2;
  b.close("ell_def", l.ell, xi1 * gap, 1e-12, "ell = xi_1 (sigma - H - 2 delta)");
  b.less("ell_positive", 0.0, l.ell);
  b.less("xi1_lower", 1.0 / (gap * (1.0 + l.theta)), xi1, "xi_1 > 1/((sigma-H-2delta)(1+theta))");
  b.less_eq("ell", std::log(o.K_ell) - l.ell * std::log(l.C_W), std::log(l.c_Af), "in logs; conditional on K_ell");
  return b.done();
}

}  // namespace fsel
