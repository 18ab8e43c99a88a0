#include "slowvary/snoozeit.hpp"

#include <algorithm>
#include <cmath>

namespace slowvary {

double radius(std::int64_t w, Timestep T) {
  if (w < 1) throw ContractViolation("radius: window must contain at least one pull");
  return std::sqrt(2.0 * std::log(static_cast<double>(T)) / static_cast<double>(w));
}

double compute_buffer(SnoozeItVariant variant, Timestep active_length, double lambda_hat,
                      double delta, Timestep T) {
  if (delta == 0.0) return kInfinity;
  if (variant == SnoozeItVariant::modified) return lambda_hat / (6.0 * delta);
  return (2.0 / delta) *
         std::sqrt(std::log(static_cast<double>(T)) / static_cast<double>(active_length));
}

SnoozeItState::SnoozeItState() {
  prefix_[0].push_back(0.0);
  prefix_[1].push_back(0.0);
}

double SnoozeItState::recent_mean(Arm a, std::int64_t w) const {
  const auto& p = prefix_[index_of(a)];
  const auto n = static_cast<std::int64_t>(p.size()) - 1;
  return (p[static_cast<std::size_t>(n)] - p[static_cast<std::size_t>(n - w)]) / static_cast<double>(w);
}

void SnoozeItState::record(Timestep t, Arm arm, double reward) {
  const auto i = index_of(arm);
  times_[i].push_back(t);
  prefix_[i].push_back(prefix_[i].back() + reward);
  last_pulled_ = arm;
}

void SnoozeItState::end_episode(Timestep t) {
  current_.t_next = t;
  completed_.push_back(current_);
  EpisodeRecord next;
  next.index = current_.index + 1;
  next.t_start = t;
  current_ = next;
  for (std::size_t i = 0; i < 2; ++i) {
    times_[i].clear();
    prefix_[i].assign(1, 0.0);
  }
  last_pulled_.reset();
}

void SnoozeItState::mark_test(Timestep g, std::int64_t tau, const TestOutcome& outcome,
                              double buffer) {
  current_.test_time = g;
  current_.active_length = tau;
  current_.lambda_hat = outcome.lambda_hat;
  current_.window = outcome.window;
  current_.buffer = buffer;
}

void SnoozeItState::snooze(Arm arm, std::optional<Timestep> until) {
  active_[index_of(arm)] = false;
  snoozed_ = Snooze{arm, until};
}

void SnoozeItState::respawn() {
  if (snoozed_) active_[index_of(snoozed_->arm)] = true;
  snoozed_.reset();
}

std::optional<TestOutcome> statistical_test(const SnoozeItState& state, Timestep t,
                                            const SnoozeItParams& params) {
  if (state.active_count() < 2) return std::nullopt;
  const Timestep T = params.horizon;
  const double log_t = std::log(static_cast<double>(T));
  const auto w_min = static_cast<std::int64_t>(std::ceil(params.c1 * log_t));
  std::int64_t w_max = (t - state.episode_start()) / 2;
  w_max = std::min({w_max, state.pulls(Arm::first), state.pulls(Arm::second)});

  for (std::int64_t w = w_max; w >= std::max<std::int64_t>(w_min, 1); --w) {
    const double r = radius(w, T);
    const double m1 = state.recent_mean(Arm::first, w);
    const double m2 = state.recent_mean(Arm::second, w);
    // LCB_a > UCB_b + 2r - delta, written as a margin that must be positive.
    const double margin1 = (m1 - r) - (m2 + r + 2.0 * r - params.drift_limit);
    const double margin2 = (m2 - r) - (m1 + r + 2.0 * r - params.drift_limit);
    if (margin1 > 0.0 || margin2 > 0.0) {
      const bool first_wins = margin1 >= margin2;
      const Arm winner = first_wins ? Arm::first : Arm::second;
      return TestOutcome{winner, other(winner), std::sqrt(params.c1 * log_t / static_cast<double>(w)),
                         w, first_wins ? margin1 : margin2};
    }
  }
  return std::nullopt;
}

SnoozeIt::SnoozeIt(SnoozeItParams params) : params_(params) {
  if (params_.horizon < 1) throw std::invalid_argument("SnoozeIt: horizon must be positive");
  if (!(params_.drift_limit >= 0.0)) throw std::invalid_argument("SnoozeIt: drift limit must be >= 0");
}

std::string SnoozeIt::name() const {
  return params_.variant == SnoozeItVariant::classic ? "snoozeit" : "snoozeit_m";
}

Arm SnoozeIt::act(Timestep t) {
  if (t != last_observed_ + 1 || pending_) {
    throw ContractViolation("SnoozeIt::act: expected t=" + std::to_string(last_observed_ + 1) +
                            ", got t=" + std::to_string(t));
  }
  if (t > params_.horizon) throw ContractViolation("SnoozeIt::act: t beyond horizon");
  Arm arm = Arm::first;
  if (state_.active_count() == 1) {
    arm = state_.is_active(Arm::first) ? Arm::first : Arm::second;
  } else if (auto last = state_.last_pulled()) {
    arm = other(*last);
  }
  pending_ = {t, arm};
  return arm;
}

void SnoozeIt::emit(Event e) {
  step_events_.push_back(e);
  events_.push_back(e);
}

void SnoozeIt::start_snooze(Timestep t, const TestOutcome& outcome, double end_time) {
  std::optional<Timestep> until;
  if (std::isfinite(end_time) && end_time < 4e18) until = static_cast<Timestep>(std::ceil(end_time));
  state_.snooze(outcome.loser, until);
  emit({EventKind::snoozed, t, outcome.loser, until});
}

void SnoozeIt::observe(Timestep t, Arm arm, double reward) {
  if (!pending_ || pending_->first != t || pending_->second != arm) {
    throw ContractViolation("SnoozeIt::observe: (t=" + std::to_string(t) + ", arm=" +
                            std::to_string(id_of(arm)) + ") does not match the preceding act");
  }
  pending_.reset();
  last_observed_ = t;
  step_events_.clear();
  state_.record(t, arm, reward);

  if (auto outcome = statistical_test(state_, t, params_)) {
    const Timestep t_i = state_.episode_start();
    const Timestep tau = t - t_i;
    const double buf =
        compute_buffer(params_.variant, tau, outcome->lambda_hat, params_.drift_limit, params_.horizon);
    state_.mark_test(t, tau, *outcome, buf);
    emit({EventKind::test_passed, t, outcome->winner, std::nullopt});

    bool snooze = false;
    double end_time = 0.0;
    if (params_.variant == SnoozeItVariant::classic) {
      snooze = buf > static_cast<double>(tau);
      end_time = static_cast<double>(t_i) + buf;
    } else {
      const double span = 2.0 * static_cast<double>(outcome->window);
      snooze = buf > span;
      end_time = static_cast<double>(t) - span + buf;
    }
    if (snooze) {
      start_snooze(t, *outcome, end_time);
    } else {
      state_.end_episode(t);
      emit({EventKind::episode_ended, t, std::nullopt, std::nullopt});
    }
  }

  // Respawn once the snooze end time is reached.
  if (const auto& s = state_.snoozed(); s && s->until && t >= *s->until) {
    const Arm back = s->arm;
    state_.respawn();
    emit({EventKind::respawned, t, back, std::nullopt});
    state_.end_episode(t);
    emit({EventKind::episode_ended, t, std::nullopt, std::nullopt});
  }
}

std::vector<EpisodeRecord> SnoozeIt::episode_log() const {
  auto log = state_.completed_episodes();
  if (last_observed_ > state_.episode_start()) {
    EpisodeRecord running = state_.current_episode();
    running.t_next = last_observed_;
    log.push_back(running);
  }
  return log;
}

}  // namespace slowvary
