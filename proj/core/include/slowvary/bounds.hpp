#pragma once

#include <vector>

#include "slowvary/gap_profile.hpp"
#include "slowvary/policy.hpp"

namespace slowvary {

/// Constants of the regret analysis.
struct BoundConstants {
  double c0 = 144.0;
  double c1 = 72.0;
  double c2 = 144.0;
  double c3 = 1.5874010519681994;  // 2^{2/3}
  double c4 = 72.0;
  double c5 = 1.0;
  double c6 = 144.0;
  double c7 = 2.0;
  double c8 = 2.0;
};

struct Block {
  Timestep first;
  Timestep last;
};

/// Blocks of floor(tau) steps tiling [1, T], tau = min(T, c3 delta^{-2/3} (ln T)^{1/3})
/// (tau = T when delta = 0). The last block may be shorter.
struct BlockPartition {
  double tau = 0.0;
  Timestep block_length = 0;
  std::vector<Block> blocks;
};

BlockPartition block_partition(Timestep T, double delta, const BoundConstants& k = {});

/// c8 + c6 * sum_j (1 / lambda_min(j)) * ln T + c7 over the block partition.
/// Throws std::invalid_argument if the profile length differs from T or some
/// block minimum is not positive.
double instance_dependent_bound(const BanditInstance& instance, double delta,
                                const DetectableGapProfile& lambda, const BoundConstants& k = {});

/// Rates with unit leading constant.
double minimax_upper_rate(Timestep T, double delta);  // T delta^{1/3} (ln T)^{1/3}
double minimax_lower_rate(Timestep T, double delta);  // T delta^{1/3}
/// c3^{-1} T delta^{2/3} (ln T)^{-1/3}; 1 when delta = 0.
double max_episodes(Timestep T, double delta, const BoundConstants& k = {});
/// c3 delta^{-2/3} (ln T)^{1/3}; T when delta = 0.
double min_episode_length(Timestep T, double delta, const BoundConstants& k = {});

/// KL(Ber(p) || Ber(q)) with 0 log 0 = 0; +inf when q is 0 or 1 and p != q.
double kl_bernoulli(double p, double q);

struct ChangeOfMeasureReport {
  double lhs_estimate = 0.0;  // sum_t sum_i KL(nu_{i,t}, nu'_{i,t}) P_nu[Alg(t) = i]
  double rhs_estimate = 0.0;  // KL(Ber(E_nu[Z]), Ber(E_nu'[Z])), Z = N_1 / T
  double mc_error = 0.0;
  double mean_z_nu = 0.0;
  double mean_z_nu_prime = 0.0;
  bool holds = false;  // lhs + 3 mc_error >= rhs
};

/// Monte-Carlo check of the two-arm change-of-measure inequality. The policy
/// is built from `nu` for both instances so the same algorithm faces both.
/// Requires Bernoulli noise and equal horizons.
ChangeOfMeasureReport change_of_measure_check(const PolicyFactory& factory, const BanditInstance& nu,
                                              const BanditInstance& nu_prime, std::int64_t n_runs,
                                              std::uint64_t seed, unsigned threads = 0);

struct LowerBoundBlock {
  double lower = 0.0;    // max(0, (sqrt m - 8/sqrt m) / 64)
  double upper = 0.0;    // m epsilon = sqrt(m) / 2
  double epsilon = 0.0;  // sqrt(1 / (4m))
};

LowerBoundBlock lb_block_bounds(Timestep m);

/// Pre-drawn rewards: table[a][t-1] is the reward of arm a at t.
struct RewardTable {
  std::vector<double> rewards[2];
};

RewardTable sample_reward_table(const BanditInstance& instance, Rng& rng);

/// True when the mean of the w table entries at t, t-2, ..., t-2(w-1) for
/// `arm` deviates from the matching average of true means by >= radius.
bool window_violates(const RewardTable& table, const RewardProfile& profile, Arm arm, Timestep t,
                     std::int64_t w, double radius);

struct GoodEventEstimate {
  double violation_rate = 0.0;
  double bound = 0.0;  // 2 / T
  std::int64_t n_runs = 0;
  std::int64_t violating_runs = 0;
};

/// Fraction of simulated reward tables in which some arm, t and w <= t/2 has
/// an alternating-window empirical mean at distance >= r(w) from its true
/// average. Requires Bernoulli noise and T <= cap.
GoodEventEstimate estimate_good_event_probability(const BanditInstance& instance, std::int64_t n_runs,
                                                  std::uint64_t seed, Timestep cap = 2000,
                                                  unsigned threads = 0);

}  // namespace slowvary
