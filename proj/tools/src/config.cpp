#include "slowvary_cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "slowvary_cli/registry.hpp"

namespace slowvary::cli {

namespace {

using nlohmann::json;

std::string type_name(const json& v) { return v.type_name(); }

void require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object, got " + type_name(v));
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(path + "." + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "required field missing");
  return *it;
}

std::int64_t integer(const json& v, const std::string& path, std::int64_t min) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer, got " + type_name(v));
  const auto x = v.get<std::int64_t>();
  if (x < min) throw ConfigError(path, "must be >= " + std::to_string(min));
  return x;
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string, got " + type_name(v));
  return v.get<std::string>();
}

RewardModel parse_noise(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown(v, path, {"kind", "variance"});
  RewardModel m;
  try {
    m.kind = noise_kind_from_string(string(require(v, path, "kind"), path + ".kind"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ".kind", e.what());
  }
  if (m.kind == NoiseKind::bernoulli) {
    if (v.contains("variance")) throw ConfigError(path + ".variance", "not allowed for Bernoulli noise");
    m.variance = 0.0;
  } else if (v.contains("variance")) {
    const auto& var = v["variance"];
    if (!var.is_number() || !(var.get<double>() > 0.0)) throw ConfigError(path + ".variance", "must be a positive number");
    m.variance = var.get<double>();
  }
  return m;
}

json noise_json(const RewardModel& m) {
  json j{{"kind", to_string(m.kind)}};
  if (m.kind == NoiseKind::gaussian) j["variance"] = m.variance;
  return j;
}

}  // namespace

GeneratorSpec parse_generator_spec(const json& doc, const std::string& path) {
  require_object(doc, path);
  reject_unknown(doc, path, {"family", "params", "noise"});
  GeneratorSpec spec;
  try {
    spec.family = family_from_string(string(require(doc, path, "family"), path + ".family"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ".family", e.what());
  }
  if (doc.contains("params")) {
    require_object(doc["params"], path + ".params");
    spec.params = doc["params"];
  }
  if (doc.contains("noise")) spec.noise = parse_noise(doc["noise"], path + ".noise");
  return spec;
}

json to_json(const GeneratorSpec& spec) {
  json j{{"family", to_string(spec.family)}, {"params", spec.params}};
  if (spec.noise) j["noise"] = noise_json(*spec.noise);
  return j;
}

ExperimentConfig parse_config(const json& doc) {
  const std::string root = "$";
  require_object(doc, root);
  reject_unknown(doc, root,
                 {"instance", "policies", "T", "n_runs", "base_seed", "output_dir", "decimation", "bound_overlays",
                  "sweep"});
  ExperimentConfig c;

  const auto& inst = require(doc, root, "instance");
  if (inst.is_string()) {
    c.instance = inst.get<std::string>();
  } else if (inst.is_object()) {
    c.instance = parse_generator_spec(inst, "$.instance");
  } else {
    throw ConfigError("$.instance", "expected a file path or a generator object, got " + type_name(inst));
  }

  const auto& pols = require(doc, root, "policies");
  if (!pols.is_array() || pols.empty()) throw ConfigError("$.policies", "expected a non-empty array");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < pols.size(); ++i) {
    const std::string p = "$.policies[" + std::to_string(i) + "]";
    require_object(pols[i], p);
    reject_unknown(pols[i], p, {"name", "params", "label"});
    PolicySpec spec;
    spec.name = string(require(pols[i], p, "name"), p + ".name");
    if (pols[i].contains("params")) {
      require_object(pols[i]["params"], p + ".params");
      spec.params = pols[i]["params"];
    }
    spec.label = pols[i].contains("label") ? string(pols[i]["label"], p + ".label") : spec.name;
    if (spec.label.empty() || spec.label.find_first_of("/\\") != std::string::npos) {
      throw ConfigError(p + ".label", "must be a non-empty file stem");
    }
    if (!labels.insert(spec.label).second) {
      throw ConfigError(p + ".label", "duplicate policy label '" + spec.label + "'");
    }
    validate_policy(spec, p);
    c.policies.push_back(std::move(spec));
  }

  c.T = integer(require(doc, root, "T"), "$.T", 2);
  if (doc.contains("n_runs")) c.n_runs = integer(doc["n_runs"], "$.n_runs", 1);
  if (doc.contains("base_seed")) {
    const auto& s = doc["base_seed"];
    if (!s.is_number_unsigned()) throw ConfigError("$.base_seed", "expected a nonnegative integer");
    c.base_seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) c.output_dir = string(doc["output_dir"], "$.output_dir");
  if (doc.contains("decimation")) c.decimation = integer(doc["decimation"], "$.decimation", 1);
  if (doc.contains("bound_overlays")) {
    if (!doc["bound_overlays"].is_boolean()) throw ConfigError("$.bound_overlays", "expected a boolean");
    c.bound_overlays = doc["bound_overlays"].get<bool>();
  }
  if (doc.contains("sweep")) {
    const auto& sw = doc["sweep"];
    require_object(sw, "$.sweep");
    reject_unknown(sw, "$.sweep", {"deltas"});
    const auto& ds = require(sw, "$.sweep", "deltas");
    if (!ds.is_array()) throw ConfigError("$.sweep.deltas", "expected an array");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string p = "$.sweep.deltas[" + std::to_string(i) + "]";
      if (!ds[i].is_number() || !(ds[i].get<double>() >= 0.0)) throw ConfigError(p, "expected a nonnegative number");
      c.sweep_deltas.push_back(ds[i].get<double>());
    }
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json to_json(const ExperimentConfig& c) {
  json j;
  if (const auto* path = std::get_if<std::string>(&c.instance)) {
    j["instance"] = *path;
  } else {
    j["instance"] = to_json(std::get<GeneratorSpec>(c.instance));
  }
  j["policies"] = json::array();
  for (const auto& p : c.policies) j["policies"].push_back({{"name", p.name}, {"params", p.params}, {"label", p.label}});
  j["T"] = c.T;
  j["n_runs"] = c.n_runs;
  j["base_seed"] = c.base_seed;
  j["output_dir"] = c.output_dir;
  j["decimation"] = c.decimation;
  j["bound_overlays"] = c.bound_overlays;
  if (!c.sweep_deltas.empty()) j["sweep"] = {{"deltas", c.sweep_deltas}};
  return j;
}

BanditInstance materialize(const ExperimentConfig& config, const std::filesystem::path& base_dir) {
  if (const auto* path = std::get_if<std::string>(&config.instance)) {
    std::filesystem::path p(*path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    auto inst = read_instance(p);
    if (inst.horizon() != config.T) {
      throw ConfigError("$.T", "config T=" + std::to_string(config.T) + " differs from instance file T=" +
                                   std::to_string(inst.horizon()));
    }
    return inst;
  }
  try {
    return generate(std::get<GeneratorSpec>(config.instance), config.T);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("$.instance", e.what());
  }
}

}  // namespace slowvary::cli
