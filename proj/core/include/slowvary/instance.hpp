#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowvary/rng.hpp"
#include "slowvary/types.hpp"

namespace slowvary {

/// Absolute slack applied when checking the per-step drift limit.
inline constexpr double kDriftTolerance = 1e-12;

/// Expected rewards of both arms over [1, T].
class RewardProfile {
 public:
  /// Throws std::invalid_argument unless both sequences are non-empty, of
  /// equal length, and every entry lies in [0, 1].
  RewardProfile(std::vector<double> arm1, std::vector<double> arm2);

  Timestep horizon() const noexcept { return static_cast<Timestep>(means_[0].size()); }

  /// Mean of `arm` at 1-based timestep `t`. No range check.
  double mean(Arm arm, Timestep t) const noexcept {
    return means_[index_of(arm)][static_cast<std::size_t>(t - 1)];
  }
  std::span<const double> means(Arm arm) const noexcept { return means_[index_of(arm)]; }

  /// max_a mu_{a,t}.
  double optimal_mean(Timestep t) const noexcept;
  /// |mu_{1,t} - mu_{2,t}|.
  double gap(Timestep t) const noexcept;

  bool operator==(const RewardProfile&) const = default;

 private:
  std::vector<double> means_[2];
};

struct DriftViolation {
  Arm arm;
  Timestep t;        // violation between t and t+1
  double magnitude;  // |mu_{a,t} - mu_{a,t+1}|
};

struct ValidationReport {
  bool ok = true;
  std::vector<DriftViolation> violations;
};

/// Checks |mu_{a,t} - mu_{a,t+1}| <= delta + kDriftTolerance for all a, t.
ValidationReport validate_drift(const RewardProfile& profile, double delta);

enum class NoiseKind { bernoulli, gaussian };

struct RewardModel {
  NoiseKind kind = NoiseKind::gaussian;
  double variance = 0.25;  // Gaussian only; Bernoulli variance is p(1-p)

  static RewardModel bernoulli() { return {NoiseKind::bernoulli, 0.0}; }
  static RewardModel gaussian(double variance = 0.25) { return {NoiseKind::gaussian, variance}; }

  bool operator==(const RewardModel&) const = default;
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& s);

/// A reward profile that is slowly varying with the declared drift limit.
/// Immutable after construction.
class BanditInstance {
 public:
  /// Throws std::invalid_argument if delta < 0 or the profile violates the
  /// drift limit.
  BanditInstance(RewardProfile profile, double drift_limit, RewardModel noise);

  const RewardProfile& profile() const noexcept { return profile_; }
  Timestep horizon() const noexcept { return profile_.horizon(); }
  double drift_limit() const noexcept { return drift_limit_; }
  const RewardModel& noise() const noexcept { return noise_; }

  bool operator==(const BanditInstance&) const = default;

 private:
  RewardProfile profile_;
  double drift_limit_;
  RewardModel noise_;
};

/// One stochastic reward for `arm` at `t`. Throws ContractViolation for
/// t outside [1, T].
double sample_reward(const BanditInstance& instance, Arm arm, Timestep t, Rng& rng);

// Instance file: {"T", "delta", "noise": {"kind", "variance"}, "means": [[...], [...]]}
nlohmann::json to_json(const BanditInstance& instance);
BanditInstance instance_from_json(const nlohmann::json& doc);
void write_instance(const BanditInstance& instance, const std::filesystem::path& path);
BanditInstance read_instance(const std::filesystem::path& path);

/// Instance file contents before the drift check, for reporting violations.
struct InstanceDocument {
  RewardProfile profile;
  double delta;
  RewardModel noise;
};
InstanceDocument parse_instance_document(const nlohmann::json& doc);
InstanceDocument read_instance_document(const std::filesystem::path& path);

}  // namespace slowvary
