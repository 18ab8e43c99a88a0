#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowvary/instance.hpp"

namespace slowvary {

enum class Family {
  stationary,
  piecewise_linear,
  well_separated,
  oscillating,
  multi_delta_common_periods,
  multi_delta_equal_cumulative,
  lower_bound_nu_prime,
};

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// Declarative instance description. `params` is a JSON object whose
/// accepted keys depend on the family:
///
///   stationary                   mu1, mu2, [delta=0]
///   piecewise_linear             delta, knots1, knots2 (arrays of [t, mean])
///   well_separated               delta, [high=0.75, low=0.25, swing=0.1, stationary_len=T/8]
///   oscillating                  delta, [amplitude=0.4, stationary_len=T/16, center=0.5]
///   multi_delta_common_periods   delta, stationary_len, drift_len, [center=0.5]
///   multi_delta_equal_cumulative delta, [amplitude=0.4, n_drifts=4, center=0.5]
///   lower_bound_nu_prime         m, [epsilon=sqrt(1/(4m)), delta=epsilon/m]
///
/// The wave families alternate stationary stretches with linear ramps whose
/// per-step slope never exceeds delta. Arm means mirror each other around
/// the center (well_separated: arm 1 around `high`, arm 2 around `low`).
/// `amplitude` is the peak gap |mu_1 - mu_2| and also each arm's sweep per
/// ramp; `swing` is the per-arm sweep of well_separated.
struct GeneratorSpec {
  Family family = Family::stationary;
  nlohmann::json params = nlohmann::json::object();
  /// Defaults to Bernoulli for lower_bound_nu_prime and Gaussian(0.25) otherwise.
  std::optional<RewardModel> noise;

  bool operator==(const GeneratorSpec&) const = default;
};

/// Builds the instance of horizon T. Throws std::invalid_argument naming the
/// offending parameter when parameters are inconsistent (unknown key, ramp
/// slope or nu' slope epsilon/m above delta, means leaving [0,1], ...).
BanditInstance generate(const GeneratorSpec& spec, Timestep T);

/// Mean of arm 1 in the lower-bound instance at block-local step t in [1, m].
double nu_prime_arm1_mean(Timestep t_in_block, Timestep m, double epsilon);

/// Build-time helper shared by the wave families: stationary stretch at
/// -amplitude/2, linear ramp of `ramp_len` steps to +amplitude/2, stationary
/// stretch, ramp back down, repeating until T values are produced.
std::vector<double> alternating_wave(Timestep T, Timestep stationary_len, Timestep ramp_len,
                                     double amplitude);

}  // namespace slowvary
