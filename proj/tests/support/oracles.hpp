#pragma once

// Slow reference implementations used to cross-check the library.

#include <cstdint>
#include <optional>
#include <vector>

#include "slowvary/gap_profile.hpp"
#include "slowvary/snoozeit.hpp"

namespace slowvary::testing {

/// Scans lambda = k * grid_step for k = K..1 and returns, per t, the first
/// lambda whose window w = ceil(c0 ln T / lambda^2) fits in [1, t] with mean
/// |mu_1 - mu_2| over that window >= lambda. Falls back to sqrt(c0 ln T / t).
DetectableGapProfile detectable_gap_oracle(const BanditInstance& instance, double grid_step);

struct BruteForceTest {
  Arm winner;
  double lambda_hat;
  std::int64_t window;
};

/// Evaluates the betterness inequality for every w in [ceil(c1 ln T), floor(n/2)]
/// (n = in-episode samples) using direct sums over the most recent w rewards of
/// each arm. Returns the largest passing w.
std::optional<BruteForceTest> brute_force_test(const std::vector<double>& rewards1,
                                               const std::vector<double>& rewards2,
                                               std::int64_t episode_samples, Timestep T, double delta,
                                               double c1 = kTestWindowC1);

/// Every w at which some ordering passes, for the minimality property.
std::vector<std::int64_t> passing_windows(const std::vector<double>& rewards1,
                                          const std::vector<double>& rewards2,
                                          std::int64_t episode_samples, Timestep T, double delta,
                                          double c1 = kTestWindowC1);

}  // namespace slowvary::testing
