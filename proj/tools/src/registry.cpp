#include "slowvary_cli/registry.hpp"

#include <map>
#include <set>

#include "slowvary/baselines.hpp"
#include "slowvary/snoozeit.hpp"

namespace slowvary::cli {

namespace {

using nlohmann::json;

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"snoozeit", {"c1"}},
      {"snoozeit_m", {"c1"}},
      {"rexp3", {"batch_length", "gamma"}},
      {"exps", {"gamma", "alpha"}},
      {"swucb_sharp", {"alpha", "window_scale"}},
      {"oracle", {}},
      {"fixed", {"arm"}},
      {"round_robin", {}},
  };
  return table;
}

double positive(const json& params, const char* key, double fallback, const std::string& path) {
  if (!params.contains(key)) return fallback;
  const auto& v = params[key];
  if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError(path + ".params." + key, "must be a positive number");
  return v.get<double>();
}

}  // namespace

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = {"snoozeit", "snoozeit_m", "rexp3",  "exps",
                                                 "swucb_sharp", "oracle", "fixed", "round_robin"};
  return names;
}

void validate_policy(const PolicySpec& spec, const std::string& path) {
  const auto it = allowed_params().find(spec.name);
  if (it == allowed_params().end()) {
    std::string known;
    for (const auto& n : policy_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError(path + ".name", "unknown policy '" + spec.name + "' (known: " + known + ")");
  }
  for (const auto& [key, v] : spec.params.items()) {
    if (!it->second.contains(key)) throw ConfigError(path + ".params." + key, "unknown parameter for " + spec.name);
  }
  const auto& p = spec.params;
  if (p.contains("gamma")) {
    const double g = positive(p, "gamma", 1.0, path);
    if (g > 1.0) throw ConfigError(path + ".params.gamma", "must lie in (0, 1]");
  }
  if (p.contains("c1")) positive(p, "c1", 1.0, path);
  if (p.contains("alpha")) {
    if (spec.name == "exps") {
      if (!p["alpha"].is_number() || p["alpha"].get<double>() < 0) {
        throw ConfigError(path + ".params.alpha", "must be a nonnegative number");
      }
    } else {
      positive(p, "alpha", 1.0, path);
    }
  }
  if (p.contains("window_scale")) positive(p, "window_scale", 1.0, path);
  if (p.contains("batch_length")) {
    if (!p["batch_length"].is_number_integer() || p["batch_length"].get<std::int64_t>() < 1) {
      throw ConfigError(path + ".params.batch_length", "must be a positive integer");
    }
  }
  if (spec.name == "fixed") {
    if (!p.contains("arm")) throw ConfigError(path + ".params.arm", "required parameter missing");
    if (!p["arm"].is_number_integer() || (p["arm"] != 1 && p["arm"] != 2)) {
      throw ConfigError(path + ".params.arm", "must be 1 or 2");
    }
  }
}

PolicyFactory make_factory(const PolicySpec& spec) {
  validate_policy(spec, "$");
  const json p = spec.params;
  const std::string& name = spec.name;
  if (name == "snoozeit" || name == "snoozeit_m") {
    const auto variant = name == "snoozeit" ? SnoozeItVariant::classic : SnoozeItVariant::modified;
    const double c1 = p.value("c1", kTestWindowC1);
    return [variant, c1](const BanditInstance& inst) {
      return std::make_unique<SnoozeIt>(SnoozeItParams{inst.horizon(), inst.drift_limit(), variant, c1});
    };
  }
  if (name == "rexp3") {
    return [p](const BanditInstance& inst) {
      auto params = Rexp3Params::defaults(inst.horizon(), inst.drift_limit());
      if (p.contains("batch_length")) params.batch_length = p["batch_length"].get<Timestep>();
      if (p.contains("gamma")) params.gamma = p["gamma"].get<double>();
      return std::make_unique<Rexp3>(params);
    };
  }
  if (name == "exps") {
    return [p](const BanditInstance& inst) {
      auto params = ExpSParams::defaults(inst.horizon(), inst.drift_limit());
      if (p.contains("gamma")) params.gamma = p["gamma"].get<double>();
      if (p.contains("alpha")) params.alpha = p["alpha"].get<double>();
      return std::make_unique<ExpS>(params);
    };
  }
  if (name == "swucb_sharp") {
    SwUcbSharpParams params;
    params.alpha = p.value("alpha", params.alpha);
    params.window_scale = p.value("window_scale", params.window_scale);
    return [params](const BanditInstance&) { return std::make_unique<SwUcbSharp>(params); };
  }
  if (name == "oracle") {
    return [](const BanditInstance& inst) { return std::make_unique<OraclePolicy>(inst); };
  }
  if (name == "fixed") {
    const Arm arm = arm_from_id(p["arm"].get<int>());
    return [arm](const BanditInstance&) { return std::make_unique<FixedArmPolicy>(arm); };
  }
  return [](const BanditInstance&) { return std::make_unique<RoundRobinPolicy>(); };
}

}  // namespace slowvary::cli
