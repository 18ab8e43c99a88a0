#pragma once

#include <vector>

#include "slowvary/instance.hpp"

namespace slowvary {

/// Window constant of the detectable gap: w(lambda) = ceil(c0 log T / lambda^2).
inline constexpr double kDetectableGapC0 = 144.0;

struct GapProfile {
  std::vector<double> values;  // values[t-1] = |mu_{1,t} - mu_{2,t}|
};

/// lambda_t: the largest gap in (0, 1] whose window w(lambda), ending at t,
/// has average signed gap magnitude at least lambda; sqrt(c0 log T / t) when
/// no such lambda exists. Windows are counted in timesteps.
struct DetectableGapProfile {
  std::vector<double> values;  // values[t-1] = lambda_t
  double c0 = kDetectableGapC0;
};

GapProfile gap_profile(const BanditInstance& instance);

/// Exact evaluation by enumerating integer windows w in [1, t]. Window w owns
/// the half-open lambda interval [sqrt(L/w), sqrt(L/(w-1))) with L = c0 ln T
/// (I_1 = [sqrt(L), inf)), clipped to (0, 1]. The best lambda inside each
/// interval is min(avg(w), upper end); it counts when it reaches the lower
/// end. O(T^2) using prefix sums. Throws std::invalid_argument for T < 2.
DetectableGapProfile detectable_gap_profile(const BanditInstance& instance);

/// Fallback value sqrt(c0 ln T / t).
double detectable_gap_fallback(Timestep t, Timestep T, double c0 = kDetectableGapC0);

}  // namespace slowvary
