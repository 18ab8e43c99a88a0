#pragma once

#include <array>
#include <vector>

#include "slowvary/policy.hpp"

namespace slowvary {

// Exp3 machinery keeps weights in log space so that they stay finite over
// long horizons; weights() exponentiates on demand. Rewards are clamped to
// [0,1] before importance weighting.

struct Rexp3Params {
  Timestep batch_length = 1;
  double gamma = 1.0;

  /// batch = ceil((2 ln 2)^{1/3} (T / V_T)^{2/3}) capped at T with V_T = T delta
  /// (a single batch when delta = 0); gamma = min(1, sqrt(2 ln 2 / ((e-1) batch))).
  static Rexp3Params defaults(Timestep T, double delta);
};

/// Exp3 restarted from uniform weights every `batch_length` steps.
class Rexp3 final : public Policy {
 public:
  explicit Rexp3(Rexp3Params params);

  /// Starts a new batch when t reaches batch_start + batch_length, then draws.
  Arm select(Timestep t, Rng& rng);
  void update(Timestep t, Arm arm, double reward);

  Arm act(Timestep t, Rng& rng) override { return select(t, rng); }
  void observe(Timestep t, Arm arm, double reward) override { update(t, arm, reward); }
  std::string name() const override { return "rexp3"; }

  /// p_i = (1 - gamma) w_i / (w_1 + w_2) + gamma / 2.
  std::array<double, 2> probabilities() const;
  std::array<double, 2> weights() const;
  const std::array<double, 2>& log_weights() const noexcept { return log_w_; }
  Timestep batch_start() const noexcept { return batch_start_; }
  const Rexp3Params& params() const noexcept { return params_; }

 private:
  Rexp3Params params_;
  std::array<double, 2> log_w_{0.0, 0.0};
  std::array<double, 2> last_p_{0.5, 0.5};
  Timestep batch_start_ = 1;
};

struct ExpSParams {
  double gamma = 1.0;
  double alpha = 0.0;

  /// alpha = 1/T; gamma = min(1, (2 ln(2T) V_T / ((e-1)^2 T))^{1/3}) with
  /// V_T = T delta, or 1/sqrt(T) when delta = 0.
  static ExpSParams defaults(Timestep T, double delta);
};

/// Exp3 with uniform weight sharing:
/// w_i <- w_i exp(gamma xhat_i / 2) + (e alpha / 2) sum_j w_j.
class ExpS final : public Policy {
 public:
  explicit ExpS(ExpSParams params);

  Arm select(Timestep t, Rng& rng);
  void update(Timestep t, Arm arm, double reward);

  Arm act(Timestep t, Rng& rng) override { return select(t, rng); }
  void observe(Timestep t, Arm arm, double reward) override { update(t, arm, reward); }
  std::string name() const override { return "exps"; }

  std::array<double, 2> probabilities() const;
  std::array<double, 2> weights() const;
  const std::array<double, 2>& log_weights() const noexcept { return log_w_; }
  const ExpSParams& params() const noexcept { return params_; }

 private:
  ExpSParams params_;
  std::array<double, 2> log_w_{0.0, 0.0};
  std::array<double, 2> last_p_{0.5, 0.5};
};

struct SwUcbSharpParams {
  double alpha = 0.8;         // window growth exponent
  double window_scale = 1.0;  // lambda_w
};

/// UCB over a sliding window of min(t, ceil(lambda_w t^alpha)) timesteps.
class SwUcbSharp final : public Policy {
 public:
  explicit SwUcbSharp(SwUcbSharpParams params = {});

  Arm select(Timestep t);
  void update(Timestep t, Arm arm, double reward);

  Arm act(Timestep t, Rng&) override { return select(t); }
  void observe(Timestep t, Arm arm, double reward) override { update(t, arm, reward); }
  std::string name() const override { return "swucb_sharp"; }

  Timestep window(Timestep t) const;
  /// Pulls of `arm` at timesteps in [t - window(t), t - 1].
  std::int64_t window_pulls(Arm arm, Timestep t) const;
  /// Index used at selection time t; +inf for arms unpulled within the window.
  double index(Arm arm, Timestep t) const;

  /// mean + sqrt((1 + alpha) ln t / max(n, 1)).
  static double ucb_index(double mean, std::int64_t n, Timestep t, double alpha);

 private:
  std::pair<std::size_t, std::size_t> window_range(Arm arm, Timestep t) const;

  SwUcbSharpParams params_;
  std::array<std::vector<Timestep>, 2> times_;
  std::array<std::vector<double>, 2> prefix_{std::vector<double>{0.0}, std::vector<double>{0.0}};
};

/// Plays argmax_a mu_{a,t} (ties to arm 1). Reads the true means.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const BanditInstance& instance) : instance_(instance) {}
  Arm act(Timestep t, Rng&) override;
  void observe(Timestep, Arm, double) override {}
  std::string name() const override { return "oracle"; }

 private:
  BanditInstance instance_;
};

class FixedArmPolicy final : public Policy {
 public:
  explicit FixedArmPolicy(Arm arm) : arm_(arm) {}
  Arm act(Timestep, Rng&) override { return arm_; }
  void observe(Timestep, Arm, double) override {}
  std::string name() const override { return "fixed"; }

 private:
  Arm arm_;
};

/// Alternates 1, 2, 1, 2, ...
class RoundRobinPolicy final : public Policy {
 public:
  Arm act(Timestep, Rng&) override;
  void observe(Timestep, Arm, double) override {}
  std::string name() const override { return "round_robin"; }

 private:
  Arm next_ = Arm::first;
};

}  // namespace slowvary
