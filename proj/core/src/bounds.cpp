#include "slowvary/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "slowvary/simulator.hpp"

namespace slowvary {

BlockPartition block_partition(Timestep T, double delta, const BoundConstants& k) {
  if (T < 1) throw std::invalid_argument("block_partition: T must be positive");
  BlockPartition part;
  const double Td = static_cast<double>(T);
  part.tau = delta > 0.0 ? std::min(Td, k.c3 * std::pow(delta, -2.0 / 3.0) * std::cbrt(std::log(Td))) : Td;
  part.block_length = std::max<Timestep>(1, static_cast<Timestep>(std::floor(part.tau)));
  for (Timestep first = 1; first <= T; first += part.block_length) {
    part.blocks.push_back({first, std::min(T, first + part.block_length - 1)});
  }
  return part;
}

double instance_dependent_bound(const BanditInstance& instance, double delta,
                                const DetectableGapProfile& lambda, const BoundConstants& k) {
  const Timestep T = instance.horizon();
  if (static_cast<Timestep>(lambda.values.size()) != T) {
    throw std::invalid_argument("instance_dependent_bound: lambda profile length differs from T");
  }
  const double log_t = std::log(static_cast<double>(T));
  double sum = 0.0;
  for (const Block& b : block_partition(T, delta, k).blocks) {
    const auto first = lambda.values.begin() + (b.first - 1);
    const auto last = lambda.values.begin() + b.last;
    const double lambda_min = *std::min_element(first, last);
    if (!(lambda_min > 0.0)) {
      throw std::invalid_argument("instance_dependent_bound: non-positive detectable gap in a block");
    }
    sum += 1.0 / lambda_min;
  }
  return k.c8 + k.c6 * sum * log_t + k.c7;
}

double minimax_upper_rate(Timestep T, double delta) {
  const double Td = static_cast<double>(T);
  return Td * std::cbrt(delta) * std::cbrt(std::log(Td));
}

double minimax_lower_rate(Timestep T, double delta) { return static_cast<double>(T) * std::cbrt(delta); }

double max_episodes(Timestep T, double delta, const BoundConstants& k) {
  if (delta == 0.0) return 1.0;
  const double Td = static_cast<double>(T);
  return Td * std::pow(delta, 2.0 / 3.0) / (k.c3 * std::cbrt(std::log(Td)));
}

double min_episode_length(Timestep T, double delta, const BoundConstants& k) {
  if (delta == 0.0) return static_cast<double>(T);
  return k.c3 * std::pow(delta, -2.0 / 3.0) * std::cbrt(std::log(static_cast<double>(T)));
}

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("kl_bernoulli: arguments must lie in [0,1]");
  }
  if (p == q) return 0.0;
  if (q == 0.0 || q == 1.0) return kInfinity;
  double kl = 0.0;
  if (p > 0.0) kl += p * std::log(p / q);
  if (p < 1.0) kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(0.0, kl);
}

namespace {

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  Moments m;
  m.mean = sum / n;
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - m.mean) * (x - m.mean);
    m.std_error = std::sqrt(sq / (n - 1.0) / n);
  }
  return m;
}

void require_bernoulli(const BanditInstance& inst, const char* who) {
  if (inst.noise().kind != NoiseKind::bernoulli) {
    throw std::invalid_argument(std::string(who) + ": requires Bernoulli rewards");
  }
}

}  // namespace

ChangeOfMeasureReport change_of_measure_check(const PolicyFactory& factory, const BanditInstance& nu,
                                              const BanditInstance& nu_prime, std::int64_t n_runs,
                                              std::uint64_t seed, unsigned threads) {
  require_bernoulli(nu, "change_of_measure_check");
  require_bernoulli(nu_prime, "change_of_measure_check");
  if (nu.horizon() != nu_prime.horizon()) {
    throw std::invalid_argument("change_of_measure_check: instances differ in horizon");
  }
  if (n_runs < 1) throw std::invalid_argument("change_of_measure_check: n_runs must be >= 1");
  const Timestep T = nu.horizon();
  const auto Tz = static_cast<std::size_t>(T);

  std::vector<double> kl[2];
  for (Arm a : {Arm::first, Arm::second}) {
    kl[index_of(a)].resize(Tz);
    for (Timestep t = 1; t <= T; ++t) {
      kl[index_of(a)][static_cast<std::size_t>(t - 1)] =
          kl_bernoulli(nu.profile().mean(a, t), nu_prime.profile().mean(a, t));
    }
  }

  const auto n = static_cast<std::size_t>(n_runs);
  std::vector<double> lhs(n), z_nu(n), z_prime(n);
  parallel_for(2 * n_runs, threads, [&](std::int64_t job) {
    const bool under_nu = job < n_runs;
    const auto i = static_cast<std::size_t>(under_nu ? job : job - n_runs);
    auto policy = factory(nu);
    const auto result = run(*policy, under_nu ? nu : nu_prime, seed + static_cast<std::uint64_t>(job));
    double info = 0.0;
    std::int64_t pulls_first = 0;
    for (std::size_t s = 0; s < Tz; ++s) {
      const Arm a = result.trace.choices[s];
      if (a == Arm::first) ++pulls_first;
      info += kl[index_of(a)][s];
    }
    const double z = static_cast<double>(pulls_first) / static_cast<double>(T);
    if (under_nu) {
      lhs[i] = info;
      z_nu[i] = z;
    } else {
      z_prime[i] = z;
    }
  });

  const Moments l = moments(lhs);
  const Moments zn = moments(z_nu);
  const Moments zp = moments(z_prime);

  ChangeOfMeasureReport report;
  report.lhs_estimate = l.mean;
  report.mean_z_nu = zn.mean;
  report.mean_z_nu_prime = zp.mean;
  report.rhs_estimate = kl_bernoulli(zn.mean, zp.mean);

  // Delta-method error of the right-hand side.
  const double p = std::clamp(zn.mean, 1e-9, 1.0 - 1e-9);
  const double q = std::clamp(zp.mean, 1e-9, 1.0 - 1e-9);
  const double dp = std::log(p * (1.0 - q) / (q * (1.0 - p)));
  const double dq = (q - p) / (q * (1.0 - q));
  const double rhs_var = dp * dp * zn.std_error * zn.std_error + dq * dq * zp.std_error * zp.std_error;
  report.mc_error = std::sqrt(l.std_error * l.std_error + rhs_var);
  report.holds = report.lhs_estimate + 3.0 * report.mc_error >= report.rhs_estimate;
  return report;
}

LowerBoundBlock lb_block_bounds(Timestep m) {
  if (m < 1) throw std::invalid_argument("lb_block_bounds: m must be >= 1");
  const double md = static_cast<double>(m);
  const double root = std::sqrt(md);
  LowerBoundBlock b;
  b.epsilon = std::sqrt(1.0 / (4.0 * md));
  b.lower = std::max(0.0, (root - 8.0 / root) / 64.0);
  b.upper = md * b.epsilon;
  return b;
}

RewardTable sample_reward_table(const BanditInstance& instance, Rng& rng) {
  RewardTable table;
  const Timestep T = instance.horizon();
  for (Arm a : {Arm::first, Arm::second}) {
    auto& row = table.rewards[index_of(a)];
    row.resize(static_cast<std::size_t>(T));
    for (Timestep t = 1; t <= T; ++t) row[static_cast<std::size_t>(t - 1)] = sample_reward(instance, a, t, rng);
  }
  return table;
}

bool window_violates(const RewardTable& table, const RewardProfile& profile, Arm arm, Timestep t,
                     std::int64_t w, double radius) {
  if (w < 1 || t - 2 * (w - 1) < 1 || t > profile.horizon()) {
    throw ContractViolation("window_violates: window does not fit in [1, t]");
  }
  const auto& row = table.rewards[index_of(arm)];
  double emp = 0.0;
  double truth = 0.0;
  for (std::int64_t i = 0; i < w; ++i) {
    const Timestep s = t - 2 * i;
    emp += row[static_cast<std::size_t>(s - 1)];
    truth += profile.mean(arm, s);
  }
  return std::abs(emp - truth) / static_cast<double>(w) >= radius;
}

GoodEventEstimate estimate_good_event_probability(const BanditInstance& instance, std::int64_t n_runs,
                                                  std::uint64_t seed, Timestep cap, unsigned threads) {
  require_bernoulli(instance, "estimate_good_event_probability");
  const Timestep T = instance.horizon();
  if (T > cap) {
    throw std::invalid_argument("estimate_good_event_probability: T=" + std::to_string(T) +
                                " exceeds the exhaustive-scan cap " + std::to_string(cap));
  }
  if (n_runs < 1) throw std::invalid_argument("estimate_good_event_probability: n_runs must be >= 1");

  const double log_t = std::log(static_cast<double>(T));
  std::vector<double> r(static_cast<std::size_t>(T / 2) + 1, kInfinity);
  for (std::int64_t w = 1; w <= T / 2; ++w) r[static_cast<std::size_t>(w)] = std::sqrt(2.0 * log_t / static_cast<double>(w));

  const auto& profile = instance.profile();
  std::atomic<std::int64_t> violating{0};
  parallel_for(n_runs, threads, [&](std::int64_t run_index) {
    Rng rng = Rng::derive(seed + static_cast<std::uint64_t>(run_index), 2);
    const RewardTable table = sample_reward_table(instance, rng);
    for (Arm a : {Arm::first, Arm::second}) {
      const auto& row = table.rewards[index_of(a)];
      for (Timestep t = 2; t <= T; ++t) {
        double emp = 0.0;
        double truth = 0.0;
        for (std::int64_t w = 1; w <= t / 2; ++w) {
          const Timestep s = t - 2 * (w - 1);
          emp += row[static_cast<std::size_t>(s - 1)];
          truth += profile.mean(a, s);
          if (std::abs(emp - truth) / static_cast<double>(w) >= r[static_cast<std::size_t>(w)]) {
            ++violating;
            return;
          }
        }
      }
    }
  });

  GoodEventEstimate est;
  est.n_runs = n_runs;
  est.violating_runs = violating.load();
  est.violation_rate = static_cast<double>(est.violating_runs) / static_cast<double>(n_runs);
  est.bound = 2.0 / static_cast<double>(T);
  return est;
}

}  // namespace slowvary
