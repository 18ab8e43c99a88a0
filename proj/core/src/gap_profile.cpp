#include "slowvary/gap_profile.hpp"

#include <algorithm>
#include <cmath>

namespace slowvary {

GapProfile gap_profile(const BanditInstance& instance) {
  const auto& p = instance.profile();
  GapProfile out;
  out.values.resize(static_cast<std::size_t>(p.horizon()));
  for (Timestep t = 1; t <= p.horizon(); ++t) out.values[static_cast<std::size_t>(t - 1)] = p.gap(t);
  return out;
}

double detectable_gap_fallback(Timestep t, Timestep T, double c0) {
  return std::sqrt(c0 * std::log(static_cast<double>(T)) / static_cast<double>(t));
}

DetectableGapProfile detectable_gap_profile(const BanditInstance& instance) {
  const auto& p = instance.profile();
  const Timestep T = p.horizon();
  if (T < 2) throw std::invalid_argument("detectable_gap_profile: T must be at least 2");

  DetectableGapProfile out;
  const double L = out.c0 * std::log(static_cast<double>(T));

  // prefix[t] = sum_{s<=t} (mu_1 - mu_2)
  std::vector<double> prefix(static_cast<std::size_t>(T) + 1, 0.0);
  for (Timestep t = 1; t <= T; ++t) {
    prefix[static_cast<std::size_t>(t)] =
        prefix[static_cast<std::size_t>(t - 1)] + (p.mean(Arm::first, t) - p.mean(Arm::second, t));
  }

  // Only windows with lower end sqrt(L/w) <= 1 can host a lambda in (0, 1].
  const auto first_window = static_cast<Timestep>(std::max(1.0, std::ceil(L)));
  std::vector<double> lower(static_cast<std::size_t>(T) + 1, 0.0);
  std::vector<double> upper(static_cast<std::size_t>(T) + 1, 1.0);
  for (Timestep w = first_window; w <= T; ++w) {
    const auto wi = static_cast<std::size_t>(w);
    lower[wi] = std::sqrt(L / static_cast<double>(w));
    upper[wi] = w == 1 ? 1.0 : std::min(1.0, std::sqrt(L / static_cast<double>(w - 1)));
  }

  out.values.resize(static_cast<std::size_t>(T));
  for (Timestep t = 1; t <= T; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    double best = -1.0;
    for (Timestep w = first_window; w <= t; ++w) {
      const auto wi = static_cast<std::size_t>(w);
      // Upper ends shrink with w: once they drop below the current best, stop.
      if (upper[wi] <= best) break;
      const double avg = std::abs(prefix[ti] - prefix[ti - wi]) / static_cast<double>(w);
      const double candidate = std::min(avg, upper[wi]);
      if (candidate >= lower[wi] && candidate > best) best = candidate;
    }
    out.values[ti - 1] = best > 0.0 ? best : detectable_gap_fallback(t, T, out.c0);
  }
  return out;
}

}  // namespace slowvary
