#pragma once

#include <string>
#include <vector>

#include "slowvary/policy.hpp"
#include "slowvary_cli/config.hpp"

namespace slowvary::cli {

const std::vector<std::string>& policy_names();

/// Checks name and parameters; throws ConfigError at `path`.
void validate_policy(const PolicySpec& spec, const std::string& path);

/// Factory reading T and delta from the instance it is given. Parameters
/// override the defaults:
///   snoozeit, snoozeit_m  c1
///   rexp3                 batch_length, gamma
///   exps                  gamma, alpha
///   swucb_sharp           alpha, window_scale
///   fixed                 arm (1 or 2, required)
PolicyFactory make_factory(const PolicySpec& spec);

}  // namespace slowvary::cli
