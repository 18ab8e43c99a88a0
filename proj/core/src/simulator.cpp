#include "slowvary/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace slowvary {

Rng reward_stream(std::uint64_t seed) { return Rng::derive(seed, 0); }
Rng policy_stream(std::uint64_t seed) { return Rng::derive(seed, 1); }

RunResult run(Policy& policy, const BanditInstance& instance, std::uint64_t seed) {
  const auto& profile = instance.profile();
  const Timestep T = instance.horizon();
  Rng rewards = reward_stream(seed);
  Rng choices = policy_stream(seed);

  RunResult result;
  result.seed = seed;
  result.trace.cumulative.resize(static_cast<std::size_t>(T));
  result.trace.choices.resize(static_cast<std::size_t>(T));
  double total = 0.0;
  for (Timestep t = 1; t <= T; ++t) {
    const Arm arm = policy.act(t, choices);
    const double reward = sample_reward(instance, arm, t, rewards);
    policy.observe(t, arm, reward);
    total += profile.optimal_mean(t) - profile.mean(arm, t);
    result.trace.cumulative[static_cast<std::size_t>(t - 1)] = total;
    result.trace.choices[static_cast<std::size_t>(t - 1)] = arm;
  }
  result.episodes = policy.episode_log();
  return result;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("SLOWVARY_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)>& job) {
  if (n <= 0) return;
  if (threads == 0) threads = default_thread_count();
  const auto workers = static_cast<unsigned>(std::min<std::int64_t>(threads, n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned k = 0; k < workers; ++k) {
      pool.emplace_back([&] {
        for (std::int64_t i = next++; i < n; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<RunResult> replicate_runs(const PolicyFactory& factory, const BanditInstance& instance,
                                      std::int64_t n_runs, std::uint64_t base_seed, unsigned threads) {
  if (n_runs < 1) throw std::invalid_argument("replicate: n_runs must be >= 1");
  std::vector<RunResult> runs(static_cast<std::size_t>(n_runs));
  parallel_for(n_runs, threads, [&](std::int64_t i) {
    auto policy = factory(instance);
    runs[static_cast<std::size_t>(i)] = run(*policy, instance, base_seed + static_cast<std::uint64_t>(i));
  });
  return runs;
}

ReplicationSummary summarize(const std::vector<RunResult>& runs) {
  if (runs.empty()) throw std::invalid_argument("summarize: no runs");
  const std::size_t T = runs.front().trace.cumulative.size();
  ReplicationSummary s;
  s.n_runs = static_cast<std::int64_t>(runs.size());
  s.mean_trace.assign(T, 0.0);
  s.std_trace.assign(T, 0.0);
  for (const auto& r : runs) {
    if (r.trace.cumulative.size() != T) throw std::invalid_argument("summarize: traces differ in length");
    s.seeds.push_back(r.seed);
  }
  const double n = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < T; ++t) {
    // Shifted by the first run so identical traces give exactly zero spread.
    const double base = runs.front().trace.cumulative[t];
    double sum = 0.0;
    for (const auto& r : runs) sum += r.trace.cumulative[t] - base;
    const double shift = sum / n;
    double sq = 0.0;
    for (const auto& r : runs) {
      const double d = r.trace.cumulative[t] - base - shift;
      sq += d * d;
    }
    s.mean_trace[t] = base + shift;
    s.std_trace[t] = std::sqrt(sq / n);
  }
  return s;
}

ReplicationSummary replicate(const PolicyFactory& factory, const BanditInstance& instance,
                             std::int64_t n_runs, std::uint64_t base_seed, unsigned threads) {
  return summarize(replicate_runs(factory, instance, n_runs, base_seed, threads));
}

}  // namespace slowvary
