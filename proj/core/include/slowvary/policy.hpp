#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slowvary/instance.hpp"
#include "slowvary/rng.hpp"
#include "slowvary/types.hpp"

namespace slowvary {

/// One SnoozeIt episode. Times follow the episodic convention: the active
/// phase starts after t_i, the test passes at g_i, the episode ends at t_next.
struct EpisodeRecord {
  std::int64_t index = 1;
  Timestep t_start = 0;                  // t_i
  std::optional<Timestep> test_time;     // g_i
  std::optional<Timestep> active_length; // tau_i = g_i - t_i
  std::optional<double> lambda_hat;
  std::optional<std::int64_t> window;    // w, per-arm pulls
  std::optional<double> buffer;          // may be +inf
  Timestep t_next = 0;                   // t_{i+1}

  bool operator==(const EpisodeRecord&) const = default;
};

/// An arm-selection rule driven by the simulator: act(t) then observe(t, arm,
/// reward) for t = 1..T, in order.
class Policy {
 public:
  virtual ~Policy() = default;

  /// Arm to pull at t. `rng` is the run's policy stream; deterministic
  /// policies ignore it.
  virtual Arm act(Timestep t, Rng& rng) = 0;

  /// Feedback for the pull chosen by the preceding act(t).
  virtual void observe(Timestep t, Arm arm, double reward) = 0;

  virtual std::string name() const = 0;

  /// Episode log (completed episodes plus the running one, closed at the last
  /// observed step). Empty for non-episodic policies.
  virtual std::vector<EpisodeRecord> episode_log() const { return {}; }
};

/// Builds a fresh policy for an instance (policies read T and delta from it;
/// the oracle also reads its means).
using PolicyFactory = std::function<std::unique_ptr<Policy>(const BanditInstance&)>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace slowvary
