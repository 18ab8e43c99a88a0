#pragma once

#include <array>
#include <optional>
#include <vector>

#include "slowvary/policy.hpp"

namespace slowvary {

/// Test-window constant: w = ceil(c1 log T / lambda_hat^2).
inline constexpr double kTestWindowC1 = 72.0;

enum class SnoozeItVariant {
  classic,   // buf = (2/delta) sqrt(log T / tau_i), snooze until t_i + buf
  modified,  // buf = lambda_hat / (6 delta), snooze until g_i - 2w + buf
};

struct SnoozeItParams {
  Timestep horizon = 1;
  double drift_limit = 0.0;
  SnoozeItVariant variant = SnoozeItVariant::classic;
  double c1 = kTestWindowC1;
};

/// Accuracy radius sqrt(2 log T / w). Throws ContractViolation for w < 1.
double radius(std::int64_t w, Timestep T);

/// Sub-optimality buffer; +inf when delta == 0.
double compute_buffer(SnoozeItVariant variant, Timestep active_length, double lambda_hat,
                      double delta, Timestep T);

struct TestOutcome {
  Arm winner;
  Arm loser;
  double lambda_hat;
  std::int64_t window;  // per-arm pulls
  double margin;        // LCB_a - UCB_b - 2r(w) + delta (> 0)
};

/// Episodic bookkeeping of SnoozeIt. Pull histories only cover the current
/// episode and are cleared whenever one begins.
class SnoozeItState {
 public:
  struct Snooze {
    Arm arm;
    std::optional<Timestep> until;  // empty: snoozed through the horizon
  };

  SnoozeItState();

  bool is_active(Arm a) const noexcept { return active_[index_of(a)]; }
  int active_count() const noexcept { return int{active_[0]} + int{active_[1]}; }
  const std::optional<Snooze>& snoozed() const noexcept { return snoozed_; }

  std::int64_t episode_index() const noexcept { return current_.index; }
  Timestep episode_start() const noexcept { return current_.t_start; }
  const EpisodeRecord& current_episode() const noexcept { return current_; }
  const std::vector<EpisodeRecord>& completed_episodes() const noexcept { return completed_; }

  std::int64_t pulls(Arm a) const noexcept {
    return static_cast<std::int64_t>(times_[index_of(a)].size());
  }
  /// Empirical mean of the most recent w in-episode pulls of `a`; w <= pulls(a).
  double recent_mean(Arm a, std::int64_t w) const;
  /// Timesteps of the in-episode pulls of `a`, oldest first.
  const std::vector<Timestep>& pull_times(Arm a) const noexcept { return times_[index_of(a)]; }
  std::optional<Arm> last_pulled() const noexcept { return last_pulled_; }

  /// Appends an in-episode observation.
  void record(Timestep t, Arm arm, double reward);
  /// Closes the current episode at t and opens the next one starting after t.
  void end_episode(Timestep t);
  void mark_test(Timestep g, std::int64_t tau, const TestOutcome& outcome, double buffer);
  void snooze(Arm arm, std::optional<Timestep> until);
  void respawn();

 private:
  std::array<bool, 2> active_{true, true};
  std::optional<Snooze> snoozed_;
  std::array<std::vector<Timestep>, 2> times_;
  std::array<std::vector<double>, 2> prefix_;  // prefix_[a][k] = sum of first k rewards
  std::optional<Arm> last_pulled_;
  EpisodeRecord current_;
  std::vector<EpisodeRecord> completed_;
};

/// lambda_hat-betterness test at time t (the time of the latest recorded
/// pull). Scans w from floor((t - t_i)/2) down to ceil(c1 log T) and returns
/// the first window where one arm's LCB exceeds the other's UCB by more than
/// 2r(w) - delta; the largest passing w gives the smallest lambda_hat. When
/// both orderings pass at that w, the larger margin wins. Empty when fewer
/// than two active arms or no window passes.
std::optional<TestOutcome> statistical_test(const SnoozeItState& state, Timestep t,
                                            const SnoozeItParams& params);

enum class EventKind { test_passed, snoozed, episode_ended, respawned };

struct Event {
  EventKind kind;
  Timestep t;
  std::optional<Arm> arm;          // winner / snoozed arm / respawned arm
  std::optional<Timestep> until;   // snoozed: end time, empty = through horizon

  bool operator==(const Event&) const = default;
};

class SnoozeIt final : public Policy {
 public:
  explicit SnoozeIt(SnoozeItParams params);

  /// Least recently pulled active arm; arm 1 opens every episode.
  Arm act(Timestep t);
  Arm act(Timestep t, Rng&) override { return act(t); }
  void observe(Timestep t, Arm arm, double reward) override;

  /// Events emitted by the most recent observe().
  const std::vector<Event>& step_events() const noexcept { return step_events_; }
  /// Every event so far.
  const std::vector<Event>& events() const noexcept { return events_; }

  std::string name() const override;
  std::vector<EpisodeRecord> episode_log() const override;

  const SnoozeItState& state() const noexcept { return state_; }
  const SnoozeItParams& params() const noexcept { return params_; }

 private:
  void emit(Event e);
  void start_snooze(Timestep t, const TestOutcome& outcome, double end_time);

  SnoozeItParams params_;
  SnoozeItState state_;
  Timestep last_observed_ = 0;
  std::optional<std::pair<Timestep, Arm>> pending_;
  std::vector<Event> step_events_;
  std::vector<Event> events_;
};

}  // namespace slowvary
