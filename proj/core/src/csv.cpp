#include "slowvary/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace slowvary::csv {

namespace {

void check_decimation(std::int64_t d) {
  if (d < 1) throw std::invalid_argument("csv: decimation must be >= 1");
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

std::string format(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

void write_gap_profile(std::ostream& os, const GapProfile& gap, const DetectableGapProfile& lambda,
                       std::int64_t decimation) {
  check_decimation(decimation);
  if (gap.values.size() != lambda.values.size()) {
    throw std::invalid_argument("csv: gap and detectable gap profiles differ in length");
  }
  os << "t,gap,detectable_gap\n";
  const auto T = static_cast<std::int64_t>(gap.values.size());
  for (std::int64_t t = decimation; t <= T; t += decimation) {
    const auto i = static_cast<std::size_t>(t - 1);
    os << t << ',' << format(gap.values[i]) << ',' << format(lambda.values[i]) << '\n';
  }
}

void write_runs(std::ostream& os, const std::vector<RunResult>& runs, std::int64_t decimation) {
  check_decimation(decimation);
  os << "run_id,t,arm,cum_regret\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& trace = runs[r].trace;
    const auto T = static_cast<std::int64_t>(trace.cumulative.size());
    for (std::int64_t t = decimation; t <= T; t += decimation) {
      const auto i = static_cast<std::size_t>(t - 1);
      os << r << ',' << t << ',' << id_of(trace.choices[i]) << ',' << format(trace.cumulative[i]) << '\n';
    }
  }
}

void write_summary(std::ostream& os, const ReplicationSummary& summary, std::int64_t decimation) {
  check_decimation(decimation);
  os << "t,mean_regret,std_regret\n";
  const auto T = static_cast<std::int64_t>(summary.mean_trace.size());
  for (std::int64_t t = decimation; t <= T; t += decimation) {
    const auto i = static_cast<std::size_t>(t - 1);
    os << t << ',' << format(summary.mean_trace[i]) << ',' << format(summary.std_trace[i]) << '\n';
  }
}

void write_episodes(std::ostream& os, const std::vector<EpisodeRecord>& episodes) {
  os << "i,t_i,g_i,tau_i,lambda_hat,w,buf,t_next\n";
  for (const auto& e : episodes) {
    os << e.index << ',' << e.t_start << ',' << optional_field(e.test_time) << ','
       << optional_field(e.active_length) << ',' << optional_field(e.lambda_hat) << ','
       << optional_field(e.window) << ',' << optional_field(e.buffer) << ',' << e.t_next << '\n';
  }
}

}  // namespace slowvary::csv
