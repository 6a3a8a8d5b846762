#include <cmath>

#include "fsel/constants/ledger.h"

namespace fsel {

nlohmann::json to_json(const ConstantsLedger& l) {
  nlohmann::json opt = {{"a_plus", l.options.a_plus}, {"a_minus", l.options.a_minus}, {"C_B", l.options.C_B},
                        {"C_G", l.options.C_G},       {"lambda", l.options.lambda},   {"K_ell", l.options.K_ell},
                        {"K_gamma", l.options.K_gamma}};
  return {{"gamma", l.gamma}, {"hurst", l.hurst}, {"alpha", l.alpha}, {"kappa", l.kappa}, {"sigma", l.sigma},
          {"xi", l.xi},       {"theta", l.theta}, {"mu_g", l.mu_g},   {"delta", l.delta}, {"t_e", l.t_e},
          {"c_Af", l.c_Af},   {"c_Ac", l.c_Ac},   {"U", l.U},         {"vartheta", l.vartheta},
          {"C_W", l.C_W},     {"beta", l.beta},   {"q", l.q},         {"K_A", l.K_A},     {"t_star", l.t_star},
          {"ell", l.ell},     {"xi1", l.xi1},     {"xi2", l.xi2},     {"options", opt}};
}

ConstantsLedger ledger_from_json(const nlohmann::json& j) {
  ConstantsLedger l;
  auto get = [&](const char* k, double& v) { v = j.at(k).get<double>(); };
  get("gamma", l.gamma);
  get("hurst", l.hurst);
  get("alpha", l.alpha);
  get("kappa", l.kappa);
  get("sigma", l.sigma);
  get("xi", l.xi);
  get("theta", l.theta);
  get("mu_g", l.mu_g);
  get("delta", l.delta);
  get("t_e", l.t_e);
  get("c_Af", l.c_Af);
  get("c_Ac", l.c_Ac);
  get("U", l.U);
  get("vartheta", l.vartheta);
  get("C_W", l.C_W);
  get("beta", l.beta);
  get("q", l.q);
  get("K_A", l.K_A);
  get("t_star", l.t_star);
  get("ell", l.ell);
  get("xi1", l.xi1);
  get("xi2", l.xi2);
  const auto& o = j.at("options");
  l.options.a_plus = o.at("a_plus").get<double>();
  l.options.a_minus = o.at("a_minus").get<double>();
  l.options.C_B = o.at("C_B").get<double>();
  l.options.C_G = o.at("C_G").get<double>();
  l.options.lambda = o.at("lambda").get<double>();
  l.options.K_ell = o.at("K_ell").get<double>();
  l.options.K_gamma = o.at("K_gamma").get<double>();
  l.options.vartheta = l.vartheta;
  return l;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& x : r.relations) {
    // JSON has no infinities; report them as strings.
    auto num = [](double v) -> nlohmann::json {
      if (std::isfinite(v)) return v;
      return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    };
    nlohmann::json e = {{"name", x.name}, {"lhs", num(x.lhs)}, {"rhs", num(x.rhs)}, {"slack", num(x.slack)},
                        {"ok", x.ok}};
    if (!x.note.empty()) e["note"] = x.note;
    rel.push_back(e);
  }
  return {{"ok", r.ok}, {"relations", rel}};
}

}  // namespace fsel
