#include "slowvary/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slowvary {

namespace {

constexpr double kLogWeightCeiling = 500.0;

// w_i / (w_1 + w_2) from log weights.
std::array<double, 2> normalized(const std::array<double, 2>& lw) {
  const double p0 = 1.0 / (1.0 + std::exp(lw[1] - lw[0]));
  return {p0, 1.0 - p0};
}

std::array<double, 2> mix(const std::array<double, 2>& share, double gamma) {
  return {(1.0 - gamma) * share[0] + gamma / 2.0, (1.0 - gamma) * share[1] + gamma / 2.0};
}

void rebase(std::array<double, 2>& lw) {
  const double top = std::max(lw[0], lw[1]);
  if (top > kLogWeightCeiling) {
    lw[0] -= top;
    lw[1] -= top;
  }
}

Arm draw(const std::array<double, 2>& p, Rng& rng) {
  return rng.uniform() < p[0] ? Arm::first : Arm::second;
}

void check_gamma(double gamma, const char* who) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": gamma must lie in (0, 1]");
  }
}

}  // namespace

Rexp3Params Rexp3Params::defaults(Timestep T, double delta) {
  Rexp3Params p;
  const double Td = static_cast<double>(T);
  const double variation = Td * delta;
  if (variation > 0.0) {
    const double batch = std::cbrt(2.0 * std::numbers::ln2) * std::pow(Td / variation, 2.0 / 3.0);
    p.batch_length = std::clamp<Timestep>(static_cast<Timestep>(std::ceil(batch)), 1, T);
  } else {
    p.batch_length = T;
  }
  p.gamma = std::min(
      1.0, std::sqrt(2.0 * std::numbers::ln2 / ((std::numbers::e - 1.0) * static_cast<double>(p.batch_length))));
  return p;
}

Rexp3::Rexp3(Rexp3Params params) : params_(params) {
  check_gamma(params_.gamma, "Rexp3");
  if (params_.batch_length < 1) throw std::invalid_argument("Rexp3: batch length must be >= 1");
}

std::array<double, 2> Rexp3::probabilities() const { return mix(normalized(log_w_), params_.gamma); }

std::array<double, 2> Rexp3::weights() const { return {std::exp(log_w_[0]), std::exp(log_w_[1])}; }

Arm Rexp3::select(Timestep t, Rng& rng) {
  if (t - batch_start_ >= params_.batch_length) {
    batch_start_ = t;
    log_w_ = {0.0, 0.0};
  }
  last_p_ = probabilities();
  return draw(last_p_, rng);
}

void Rexp3::update(Timestep, Arm arm, double reward) {
  const auto i = index_of(arm);
  const double xhat = std::clamp(reward, 0.0, 1.0) / last_p_[i];
  log_w_[i] += params_.gamma * xhat / 2.0;
  rebase(log_w_);
}

ExpSParams ExpSParams::defaults(Timestep T, double delta) {
  ExpSParams p;
  const double Td = static_cast<double>(T);
  p.alpha = 1.0 / Td;
  const double variation = Td * delta;
  if (variation > 0.0) {
    const double em1 = std::numbers::e - 1.0;
    p.gamma = std::min(1.0, std::cbrt(2.0 * std::log(2.0 * Td) * variation / (em1 * em1 * Td)));
  } else {
    p.gamma = std::min(1.0, 1.0 / std::sqrt(Td));
  }
  return p;
}

ExpS::ExpS(ExpSParams params) : params_(params) {
  check_gamma(params_.gamma, "ExpS");
  if (!(params_.alpha >= 0.0)) throw std::invalid_argument("ExpS: alpha must be >= 0");
}

std::array<double, 2> ExpS::probabilities() const { return mix(normalized(log_w_), params_.gamma); }

std::array<double, 2> ExpS::weights() const { return {std::exp(log_w_[0]), std::exp(log_w_[1])}; }

Arm ExpS::select(Timestep, Rng& rng) {
  last_p_ = probabilities();
  return draw(last_p_, rng);
}

void ExpS::update(Timestep, Arm arm, double reward) {
  const auto played = index_of(arm);
  const double xhat = std::clamp(reward, 0.0, 1.0) / last_p_[played];
  const double top = std::max(log_w_[0], log_w_[1]);
  const double total = std::exp(log_w_[0] - top) + std::exp(log_w_[1] - top);
  const double share = std::numbers::e * params_.alpha / 2.0 * total;
  for (std::size_t i = 0; i < 2; ++i) {
    const double boost = i == played ? params_.gamma * xhat / 2.0 : 0.0;
    log_w_[i] = top + std::log(std::exp(log_w_[i] - top + boost) + share);
  }
  rebase(log_w_);
}

SwUcbSharp::SwUcbSharp(SwUcbSharpParams params) : params_(params) {
  if (!(params_.alpha > 0.0)) throw std::invalid_argument("SwUcbSharp: alpha must be positive");
  if (!(params_.window_scale > 0.0)) throw std::invalid_argument("SwUcbSharp: window scale must be positive");
}

Timestep SwUcbSharp::window(Timestep t) const {
  const double w = std::ceil(params_.window_scale * std::pow(static_cast<double>(t), params_.alpha));
  return std::max<Timestep>(1, std::min<Timestep>(t, static_cast<Timestep>(w)));
}

std::pair<std::size_t, std::size_t> SwUcbSharp::window_range(Arm arm, Timestep t) const {
  const auto& times = times_[index_of(arm)];
  const Timestep start = t - window(t);
  const auto first = std::lower_bound(times.begin(), times.end(), start);
  const auto last = std::lower_bound(first, times.end(), t);
  return {static_cast<std::size_t>(first - times.begin()), static_cast<std::size_t>(last - times.begin())};
}

std::int64_t SwUcbSharp::window_pulls(Arm arm, Timestep t) const {
  const auto [lo, hi] = window_range(arm, t);
  return static_cast<std::int64_t>(hi - lo);
}

double SwUcbSharp::ucb_index(double mean, std::int64_t n, Timestep t, double alpha) {
  return mean + std::sqrt((1.0 + alpha) * std::log(static_cast<double>(t)) /
                          static_cast<double>(std::max<std::int64_t>(n, 1)));
}

double SwUcbSharp::index(Arm arm, Timestep t) const {
  const auto [lo, hi] = window_range(arm, t);
  if (hi == lo) return kInfinity;
  const auto& prefix = prefix_[index_of(arm)];
  const auto n = static_cast<std::int64_t>(hi - lo);
  return ucb_index((prefix[hi] - prefix[lo]) / static_cast<double>(n), n, t, params_.alpha);
}

Arm SwUcbSharp::select(Timestep t) {
  return index(Arm::second, t) > index(Arm::first, t) ? Arm::second : Arm::first;
}

void SwUcbSharp::update(Timestep t, Arm arm, double reward) {
  const auto i = index_of(arm);
  times_[i].push_back(t);
  prefix_[i].push_back(prefix_[i].back() + reward);
}

Arm OraclePolicy::act(Timestep t, Rng&) {
  const auto& p = instance_.profile();
  return p.mean(Arm::second, t) > p.mean(Arm::first, t) ? Arm::second : Arm::first;
}

Arm RoundRobinPolicy::act(Timestep, Rng&) {
  const Arm arm = next_;
  next_ = other(next_);
  return arm;
}

}  // namespace slowvary
