#include "slowvary/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace slowvary {

RewardProfile::RewardProfile(std::vector<double> arm1, std::vector<double> arm2)
    : means_{std::move(arm1), std::move(arm2)} {
  if (means_[0].empty()) throw std::invalid_argument("reward profile: horizon must be positive");
  if (means_[0].size() != means_[1].size()) {
    throw std::invalid_argument("reward profile: arm sequences differ in length (" +
                                std::to_string(means_[0].size()) + " vs " +
                                std::to_string(means_[1].size()) + ")");
  }
  for (int a = 0; a < 2; ++a) {
    for (std::size_t i = 0; i < means_[a].size(); ++i) {
      const double mu = means_[a][i];
      if (!(mu >= 0.0 && mu <= 1.0)) {
        std::ostringstream msg;
        msg << "reward profile: mean of arm " << (a + 1) << " at t=" << (i + 1) << " is " << mu
            << ", outside [0,1]";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

double RewardProfile::optimal_mean(Timestep t) const noexcept {
  return std::max(mean(Arm::first, t), mean(Arm::second, t));
}

double RewardProfile::gap(Timestep t) const noexcept {
  return std::abs(mean(Arm::first, t) - mean(Arm::second, t));
}

ValidationReport validate_drift(const RewardProfile& profile, double delta) {
  ValidationReport report;
  const Timestep T = profile.horizon();
  for (Arm arm : {Arm::first, Arm::second}) {
    for (Timestep t = 1; t < T; ++t) {
      const double step = std::abs(profile.mean(arm, t) - profile.mean(arm, t + 1));
      if (step > delta + kDriftTolerance) report.violations.push_back({arm, t, step});
    }
  }
  std::sort(report.violations.begin(), report.violations.end(),
            [](const DriftViolation& x, const DriftViolation& y) {
              return x.t != y.t ? x.t < y.t : index_of(x.arm) < index_of(y.arm);
            });
  report.ok = report.violations.empty();
  return report;
}

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::bernoulli ? "bernoulli" : "gaussian";
}

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "bernoulli") return NoiseKind::bernoulli;
  if (s == "gaussian") return NoiseKind::gaussian;
  throw std::invalid_argument("unknown noise kind '" + s + "' (expected bernoulli|gaussian)");
}

BanditInstance::BanditInstance(RewardProfile profile, double drift_limit, RewardModel noise)
    : profile_(std::move(profile)), drift_limit_(drift_limit), noise_(noise) {
  if (!(drift_limit_ >= 0.0) || !std::isfinite(drift_limit_)) {
    throw std::invalid_argument("drift limit must be a finite nonnegative number");
  }
  if (noise_.kind == NoiseKind::gaussian && !(noise_.variance > 0.0)) {
    throw std::invalid_argument("gaussian noise variance must be positive");
  }
  const auto report = validate_drift(profile_, drift_limit_);
  if (!report.ok) {
    const auto& v = report.violations.front();
    std::ostringstream msg;
    msg << "profile violates drift limit " << drift_limit_ << ": " << report.violations.size()
        << " violation(s), first at arm " << id_of(v.arm) << ", t=" << v.t << " (step "
        << v.magnitude << ")";
    throw std::invalid_argument(msg.str());
  }
}

double sample_reward(const BanditInstance& instance, Arm arm, Timestep t, Rng& rng) {
  if (t < 1 || t > instance.horizon()) {
    throw ContractViolation("sample_reward: t=" + std::to_string(t) + " outside [1, " +
                            std::to_string(instance.horizon()) + "]");
  }
  const double mu = instance.profile().mean(arm, t);
  if (instance.noise().kind == NoiseKind::bernoulli) return rng.bernoulli(mu) ? 1.0 : 0.0;
  return mu + std::sqrt(instance.noise().variance) * rng.normal();
}

nlohmann::json to_json(const BanditInstance& instance) {
  const auto& p = instance.profile();
  nlohmann::json doc;
  doc["T"] = p.horizon();
  doc["delta"] = instance.drift_limit();
  doc["noise"] = {{"kind", to_string(instance.noise().kind)},
                  {"variance", instance.noise().variance}};
  auto m1 = p.means(Arm::first);
  auto m2 = p.means(Arm::second);
  doc["means"] = nlohmann::json::array({std::vector<double>(m1.begin(), m1.end()),
                                        std::vector<double>(m2.begin(), m2.end())});
  return doc;
}

namespace {

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw std::invalid_argument(std::string("instance: missing field '") + key + "'");
  return *it;
}

}  // namespace

InstanceDocument parse_instance_document(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("instance: document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "T" && key != "delta" && key != "noise" && key != "means") {
      throw std::invalid_argument("instance: unknown field '" + key + "'");
    }
  }
  const auto& T = require(doc, "T");
  const auto& delta = require(doc, "delta");
  const auto& noise = require(doc, "noise");
  const auto& means = require(doc, "means");
  if (!T.is_number_integer() || T.get<std::int64_t>() < 1) {
    throw std::invalid_argument("instance: 'T' must be a positive integer");
  }
  if (!delta.is_number()) throw std::invalid_argument("instance: 'delta' must be a number");
  if (!noise.is_object() || !noise.contains("kind") || !noise["kind"].is_string()) {
    throw std::invalid_argument("instance: 'noise.kind' must be a string");
  }
  for (const auto& [key, _] : noise.items()) {
    if (key != "kind" && key != "variance") throw std::invalid_argument("instance: unknown field 'noise." + key + "'");
  }
  RewardModel model;
  model.kind = noise_kind_from_string(noise["kind"].get<std::string>());
  if (model.kind == NoiseKind::gaussian) {
    if (noise.contains("variance") && !noise["variance"].is_number()) {
      throw std::invalid_argument("instance: 'noise.variance' must be a number");
    }
    model.variance = noise.contains("variance") ? noise["variance"].get<double>() : 0.25;
  } else {
    model.variance = 0.0;
  }
  if (!means.is_array() || means.size() != 2 || !means[0].is_array() || !means[1].is_array()) {
    throw std::invalid_argument("instance: 'means' must be an array of two arrays");
  }
  std::vector<double> seq[2];
  for (std::size_t a = 0; a < 2; ++a) {
    for (const auto& v : means[a]) {
      if (!v.is_number()) throw std::invalid_argument("instance: 'means' entries must be numbers");
      seq[a].push_back(v.get<double>());
    }
  }
  const auto horizon = static_cast<std::size_t>(T.get<std::int64_t>());
  if (seq[0].size() != horizon || seq[1].size() != horizon) {
    throw std::invalid_argument("instance: mean sequences must have length T=" + std::to_string(horizon));
  }
  return {RewardProfile(std::move(seq[0]), std::move(seq[1])), delta.get<double>(), model};
}

BanditInstance instance_from_json(const nlohmann::json& doc) {
  auto parsed = parse_instance_document(doc);
  return BanditInstance(std::move(parsed.profile), parsed.delta, parsed.noise);
}

void write_instance(const BanditInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << to_json(instance).dump() << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("instance file '" + path.string() + "': " + e.what());
  }
  return doc;
}

}  // namespace

BanditInstance read_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

InstanceDocument read_instance_document(const std::filesystem::path& path) {
  return parse_instance_document(read_json_file(path));
}

}  // namespace slowvary
