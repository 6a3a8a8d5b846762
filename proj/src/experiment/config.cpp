#include "fsel/experiment/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include "fsel/common/error.h"

namespace fsel {
namespace {

using nlohmann::json;

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) throw ConfigError(join(path, k), "unknown field");
}

const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const std::string& path, const char* key, std::optional<double> fallback) {
  const json* v = member(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "required field is missing");
  }
  if (!v->is_number()) throw ConfigError(join(path, key), "must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

std::uint64_t unsigned_int(const json& obj, const std::string& path, const char* key,
                           std::optional<std::uint64_t> fallback) {
  const json* v = member(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "required field is missing");
  }
  if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
    throw ConfigError(join(path, key), "must be a non-negative integer");
  return v->get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& path, const char* key, const char* fallback) {
  const json* v = member(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(join(path, key), "must be a string");
  return v->get<std::string>();
}

const json& object(const json& obj, const std::string& path, const char* key, const json& empty) {
  const json* v = member(obj, key);
  if (!v) return empty;
  if (!v->is_object()) throw ConfigError(join(path, key), "must be an object");
  return *v;
}

}  // namespace

const char* to_string(Scheme s) { return s == Scheme::euler ? "euler" : "flow_splitting"; }
const char* to_string(MarginMode m) { return m == MarginMode::paper ? "paper" : "relative"; }
const char* to_string(NoiseMethod m) { return m == NoiseMethod::exact ? "exact" : "volterra"; }
const char* to_string(Selected s) {
  switch (s) {
    case Selected::plus: return "plus";
    case Selected::minus: return "minus";
    default: return "undecided";
  }
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
  if (member(doc, "config")) {
    // A manifest from an earlier run.
    const ExperimentConfig c = parse_config(doc.at("config"));
    if (const json* h = member(doc, "config_hash"); h && h->is_string() && h->get<std::string>() != config_hash(c))
      throw ConfigError("config_hash", "does not match the embedded config");
    return c;
  }
  reject_unknown(doc, "", {"schema_version", "model", "grid", "n_paths", "seed", "scheme", "x0", "selection", "noise",
                           "epsilons", "save_paths"});
  const json empty = json::object();
  ExperimentConfig c;

  const auto version = unsigned_int(doc, "", "schema_version", kSchemaVersion);
  if (version != static_cast<std::uint64_t>(kSchemaVersion))
    throw ConfigError("schema_version", "unsupported version " + std::to_string(version));

  const json& m = object(doc, "", "model", empty);
  if (!member(doc, "model")) throw ConfigError("model", "required field is missing");
  reject_unknown(m, "model", {"gamma", "hurst", "a_plus", "a_minus", "epsilon"});
  c.model.gamma = number(m, "model", "gamma", std::nullopt);
  c.model.hurst = number(m, "model", "hurst", std::nullopt);
  c.model.a_plus = number(m, "model", "a_plus", 1.0);
  c.model.a_minus = number(m, "model", "a_minus", 1.0);
  c.model.epsilon = number(m, "model", "epsilon", std::nullopt);
  try {
    validate(c.model);
  } catch (const DomainError& e) {
    throw ConfigError("model", e.what());
  }
  if (!(c.model.gamma > -1.0)) throw ConfigError("model.gamma", "numerical integration needs gamma > -1");

  const json& g = object(doc, "", "grid", empty);
  reject_unknown(g, "grid", {"dt_over_t_eps", "horizon_over_t_eps"});
  c.dt_over_t_eps = number(g, "grid", "dt_over_t_eps", 1e-3);
  c.horizon_over_t_eps = number(g, "grid", "horizon_over_t_eps", 50.0);
  if (!(c.dt_over_t_eps > 0.0)) throw ConfigError("grid.dt_over_t_eps", "must be > 0");
  if (!(c.horizon_over_t_eps >= 10.0)) throw ConfigError("grid.horizon_over_t_eps", "must be >= 10");
  const double steps = c.horizon_over_t_eps / c.dt_over_t_eps;
  if (steps > 5e7) throw ConfigError("grid", "more than 5e7 steps per path");
  if (std::abs(steps - std::round(steps)) > 1e-6 * steps)
    throw ConfigError("grid", "horizon_over_t_eps must be a whole number of steps");

  c.n_paths = unsigned_int(doc, "", "n_paths", std::nullopt);
  if (c.n_paths < 1) throw ConfigError("n_paths", "must be >= 1");
  c.seed = unsigned_int(doc, "", "seed", std::nullopt);

  const std::string scheme = text(doc, "", "scheme", "flow_splitting");
  if (scheme == "flow_splitting") c.scheme = Scheme::flow_splitting;
  else if (scheme == "euler") c.scheme = Scheme::euler;
  else throw ConfigError("scheme", "must be \"flow_splitting\" or \"euler\"");
  c.x0 = number(doc, "", "x0", 0.0);

  const json& s = object(doc, "", "selection", empty);
  reject_unknown(s, "selection", {"alpha", "margin_mode", "relative_delta", "min_tail_over_t_eps"});
  c.alpha = number(s, "selection", "alpha", 0.5 * (c.model.hurst + 1.0 / (1.0 - c.model.gamma)));
  if (!(c.alpha > 0.0)) throw ConfigError("selection.alpha", "must be > 0");
  const std::string mode = text(s, "selection", "margin_mode", "paper");
  if (mode == "paper") c.selection.margin_mode = MarginMode::paper;
  else if (mode == "relative") c.selection.margin_mode = MarginMode::relative;
  else throw ConfigError("selection.margin_mode", "must be \"paper\" or \"relative\"");
  c.selection.relative_delta = number(s, "selection", "relative_delta", 0.1);
  if (!(c.selection.relative_delta > 0.0 && c.selection.relative_delta < 1.0))
    throw ConfigError("selection.relative_delta", "must lie in (0, 1)");
  c.selection.min_tail = number(s, "selection", "min_tail_over_t_eps", 10.0);
  if (!(c.selection.min_tail >= 0.0 && c.selection.min_tail <= c.horizon_over_t_eps))
    throw ConfigError("selection.min_tail_over_t_eps", "must lie in [0, horizon_over_t_eps]");

  const json& nz = object(doc, "", "noise", empty);
  reject_unknown(nz, "noise", {"method", "history_over_t_eps"});
  const std::string method = text(nz, "noise", "method", "exact");
  if (method == "exact") c.noise = NoiseMethod::exact;
  else if (method == "volterra") c.noise = NoiseMethod::volterra;
  else throw ConfigError("noise.method", "must be \"exact\" or \"volterra\"");
  c.history_over_t_eps = number(nz, "noise", "history_over_t_eps", 100.0);
  if (!(c.history_over_t_eps >= 0.0)) throw ConfigError("noise.history_over_t_eps", "must be >= 0");

  if (const json* e = member(doc, "epsilons")) {
    if (!e->is_array()) throw ConfigError("epsilons", "must be an array");
    for (std::size_t k = 0; k < e->size(); ++k) {
      const json& v = (*e)[k];
      const std::string path = "epsilons[" + std::to_string(k) + "]";
      if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError(path, "must be a number > 0");
      c.epsilons.push_back(v.get<double>());
    }
  }
  if (const json* v = member(doc, "save_paths")) {
    if (!v->is_boolean()) throw ConfigError("save_paths", "must be a boolean");
    c.save_paths = v->get<bool>();
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("$", "cannot open " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j = {
      {"schema_version", kSchemaVersion},
      {"model",
       {{"gamma", c.model.gamma},
        {"hurst", c.model.hurst},
        {"a_plus", c.model.a_plus},
        {"a_minus", c.model.a_minus},
        {"epsilon", c.model.epsilon}}},
      {"grid", {{"dt_over_t_eps", c.dt_over_t_eps}, {"horizon_over_t_eps", c.horizon_over_t_eps}}},
      {"n_paths", c.n_paths},
      {"seed", c.seed},
      {"scheme", to_string(c.scheme)},
      {"x0", c.x0},
      {"selection",
       {{"alpha", c.alpha},
        {"margin_mode", to_string(c.selection.margin_mode)},
        {"relative_delta", c.selection.relative_delta},
        {"min_tail_over_t_eps", c.selection.min_tail}}},
      {"noise", {{"method", to_string(c.noise)}, {"history_over_t_eps", c.history_over_t_eps}}},
      {"epsilons", c.epsilons},
      {"save_paths", c.save_paths},
  };
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fsel
