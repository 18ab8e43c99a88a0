#include "random_instances.hpp"

#include <algorithm>

#include "slowvary/rng.hpp"

namespace slowvary::testing {

namespace {

double reflect(double x, double lo, double hi) {
  while (x < lo || x > hi) {
    if (x < lo) x = 2.0 * lo - x;
    if (x > hi) x = 2.0 * hi - x;
  }
  return x;
}

std::vector<double> walk(Rng& rng, Timestep T, double delta, double lo, double hi) {
  std::vector<double> xs(static_cast<std::size_t>(T));
  double x = lo + (hi - lo) * rng.uniform();
  for (auto& v : xs) {
    v = x;
    // Scale keeps reflected steps within delta after rounding.
    x = reflect(x + delta * (1.0 - 1e-9) * (2.0 * rng.uniform() - 1.0), lo, hi);
  }
  return xs;
}

}  // namespace

BanditInstance random_walk_instance(std::uint64_t seed, Timestep T, double delta, const WalkBox& box,
                                    RewardModel noise) {
  Rng rng = Rng::derive(seed, 7);
  auto a1 = walk(rng, T, delta, box.lo1, box.hi1);
  auto a2 = walk(rng, T, delta, box.lo2, box.hi2);
  return BanditInstance(RewardProfile(std::move(a1), std::move(a2)), delta, noise);
}

double uniform_in(std::uint64_t seed, std::uint64_t stream, double lo, double hi) {
  Rng rng = Rng::derive(seed, stream);
  return lo + (hi - lo) * rng.uniform();
}

}  // namespace slowvary::testing
