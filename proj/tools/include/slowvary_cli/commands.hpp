#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace slowvary::cli {

/// Exit codes: 0 success, 1 a check reported a violation, 2 usage or module error.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kError = 2 };

struct Options {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> instance;
  std::optional<std::string> spec;  // inline GeneratorSpec JSON
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> runs;
  std::optional<std::int64_t> decimate;
  std::optional<std::int64_t> T;
  std::optional<std::int64_t> m;
  std::optional<double> delta;
  std::vector<std::string> policies;
};

int cmd_validate(const Options& opt, std::ostream& out);
int cmd_gen(const Options& opt, std::ostream& out);
int cmd_gap_profile(const Options& opt, std::ostream& out);
int cmd_run(const Options& opt, std::ostream& out);
int cmd_sweep(const Options& opt, std::ostream& out);
int cmd_bounds(const Options& opt, std::ostream& out);
int cmd_lb_verify(const Options& opt, std::ostream& out);

}  // namespace slowvary::cli
