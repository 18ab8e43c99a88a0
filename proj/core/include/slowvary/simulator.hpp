#pragma once

#include <cstdint>
#include <vector>

#include "slowvary/policy.hpp"

namespace slowvary {

/// Cumulative dynamic pseudo-regret of one run, accounted with true means.
struct RegretTrace {
  std::vector<double> cumulative;  // cumulative[t-1] = sum_{s<=t} mu*_s - mu_{choice_s, s}
  std::vector<Arm> choices;

  double final_regret() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

struct RunResult {
  RegretTrace trace;
  std::vector<EpisodeRecord> episodes;  // empty for non-episodic policies
  std::uint64_t seed = 0;
};

struct ReplicationSummary {
  std::int64_t n_runs = 0;
  std::vector<double> mean_trace;
  std::vector<double> std_trace;  // population standard deviation
  std::vector<std::uint64_t> seeds;

  double final_mean() const { return mean_trace.empty() ? 0.0 : mean_trace.back(); }
  double final_std() const { return std_trace.empty() ? 0.0 : std_trace.back(); }
};

/// Policy (stream 1) and reward (stream 0) randomness for a run seed.
Rng reward_stream(std::uint64_t seed);
Rng policy_stream(std::uint64_t seed);

/// Plays `policy` for t = 1..T. Contract violations raised by the policy
/// propagate unchanged.
RunResult run(Policy& policy, const BanditInstance& instance, std::uint64_t seed);

/// Worker count: SLOWVARY_THREADS if set (>= 1), else hardware concurrency.
unsigned default_thread_count();

/// Runs seeds base_seed .. base_seed + n_runs - 1 on up to `threads` workers
/// (0 = default_thread_count()). Results are ordered by run index.
std::vector<RunResult> replicate_runs(const PolicyFactory& factory, const BanditInstance& instance,
                                      std::int64_t n_runs, std::uint64_t base_seed,
                                      unsigned threads = 0);

/// Per-t mean and population std, summed in run-index order.
ReplicationSummary summarize(const std::vector<RunResult>& runs);

ReplicationSummary replicate(const PolicyFactory& factory, const BanditInstance& instance,
                             std::int64_t n_runs, std::uint64_t base_seed, unsigned threads = 0);

/// Evaluates `job(i)` for i in [0, n) on up to `threads` workers. Exceptions
/// from any job are rethrown after all workers join.
void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)>& job);

}  // namespace slowvary
