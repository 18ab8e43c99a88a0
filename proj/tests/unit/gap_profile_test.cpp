#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "random_instances.hpp"
#include "slowvary/gap_profile.hpp"
#include "slowvary/generators.hpp"

namespace sv = slowvary;

namespace {

sv::BanditInstance stationary(sv::Timestep T, double mu1, double mu2) {
  return sv::generate({sv::Family::stationary, {{"mu1", mu1}, {"mu2", mu2}}, std::nullopt}, T);
}

double L(sv::Timestep T) { return 144.0 * std::log(static_cast<double>(T)); }

}  // namespace

TEST(GapProfile, IdenticalArmsGiveZeros) {
  for (double g : sv::gap_profile(stationary(50, 0.4, 0.4)).values) EXPECT_EQ(g, 0.0);
}

TEST(GapProfile, ConstantGap) {
  for (double g : sv::gap_profile(stationary(50, 0.8, 0.5)).values) EXPECT_NEAR(g, 0.3, 1e-15);
}

TEST(DetectableGap, RejectsTinyHorizon) {
  EXPECT_THROW(sv::detectable_gap_profile(stationary(1, 0.8, 0.5)), std::invalid_argument);
}

TEST(DetectableGap, StationaryHalfGapReachedOnceWindowFits) {
  const sv::Timestep T = 12000;
  const auto lambda = sv::detectable_gap_profile(stationary(T, 0.9, 0.4));
  const auto t0 = static_cast<sv::Timestep>(std::ceil(L(T) / 0.25));
  ASSERT_LT(t0, T);
  for (sv::Timestep t = t0; t <= T; t += 97) EXPECT_DOUBLE_EQ(lambda.values[t - 1], 0.5) << t;
}

TEST(DetectableGap, FallbackBeforeFirstAdmissibleWindow) {
  const sv::Timestep T = 5000;
  const auto lambda = sv::detectable_gap_profile(stationary(T, 1.0, 0.0));
  const auto first = static_cast<sv::Timestep>(std::ceil(L(T)));
  for (sv::Timestep t = 1; t < first; ++t) {
    EXPECT_EQ(lambda.values[t - 1], sv::detectable_gap_fallback(t, T)) << t;
  }
  EXPECT_DOUBLE_EQ(lambda.values[first - 1], 1.0);
}

TEST(DetectableGap, IdenticalArmsAreAllFallback) {
  const sv::Timestep T = 3000;
  const auto lambda = sv::detectable_gap_profile(stationary(T, 0.5, 0.5));
  const auto oracle = sv::testing::detectable_gap_oracle(stationary(T, 0.5, 0.5), 1e-3);
  for (sv::Timestep t = 1; t <= T; ++t) {
    EXPECT_EQ(lambda.values[t - 1], std::sqrt(L(T) / t));
    EXPECT_EQ(oracle.values[t - 1], lambda.values[t - 1]);
  }
}

TEST(DetectableGap, StationaryDominance) {
  for (double gap : {0.45, 0.6, 0.75}) {
    const sv::Timestep T = 8000;
    const auto lambda = sv::detectable_gap_profile(stationary(T, 0.5 + gap / 2, 0.5 - gap / 2));
    const auto t0 = static_cast<sv::Timestep>(std::ceil(L(T) / (gap * gap)));
    for (sv::Timestep t = t0; t <= T; ++t) ASSERT_GE(lambda.values[t - 1], gap - 1e-12) << t;
  }
}

TEST(DetectableGap, PositiveAndBounded) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = sv::testing::random_walk_instance(seed, 1500, 2e-3, {0.7, 1.0, 0.0, 0.3});
    const auto lambda = sv::detectable_gap_profile(inst);
    for (sv::Timestep t = 1; t <= 1500; ++t) {
      const double v = lambda.values[t - 1];
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, std::max(1.0, std::sqrt(L(1500) / t)) + 1e-15);
    }
  }
}

TEST(DetectableGap, MatchesGridOracleOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = sv::testing::random_walk_instance(100 + seed, 200 + 300 * seed, 1e-3, {0.75, 1.0, 0.0, 0.15});
    const auto fast = sv::detectable_gap_profile(inst);
    const auto slow = sv::testing::detectable_gap_oracle(inst, 1e-4);
    for (std::size_t i = 0; i < fast.values.size(); ++i) {
      ASSERT_NEAR(fast.values[i], slow.values[i], 1e-4) << "seed " << seed << " t " << i + 1;
    }
  }
}

TEST(DetectableGap, Deterministic) {
  const auto inst = sv::testing::random_walk_instance(8, 1200, 1e-3, {0.8, 1.0, 0.0, 0.2});
  EXPECT_EQ(sv::detectable_gap_profile(inst).values, sv::detectable_gap_profile(inst).values);
}
