#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "slowvary/gap_profile.hpp"
#include "slowvary/simulator.hpp"

namespace slowvary::csv {

/// Shortest decimal that round-trips; "inf" / "-inf" / "nan" otherwise.
std::string format(double x);

/// Time-indexed writers emit rows for t = d, 2d, ... <= T (d = decimation),
/// so a file holds floor(T / d) data rows after its header.
void write_gap_profile(std::ostream& os, const GapProfile& gap, const DetectableGapProfile& lambda,
                       std::int64_t decimation = 1);
void write_runs(std::ostream& os, const std::vector<RunResult>& runs, std::int64_t decimation = 1);
void write_summary(std::ostream& os, const ReplicationSummary& summary, std::int64_t decimation = 1);
/// Absent optional fields are written empty.
void write_episodes(std::ostream& os, const std::vector<EpisodeRecord>& episodes);

}  // namespace slowvary::csv
