#ifndef HOLOPLAN_STATS_H_
#define HOLOPLAN_STATS_H_

#include <array>
#include <string>
#include <vector>

namespace holoplan {

// One tool-versus-target displacement sample, millimetres.
using DiscrepancySample = std::array<double, 2>;

struct AxisStats {
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n - 1 denominator)
  double stddev = 0.0;
};

struct DiscrepancyStats {
  std::size_t count = 0;
  AxisStats x;
  AxisStats y;
};

// Throws InsufficientSamples for fewer than two samples and InvalidArgument
// for non-finite values.
DiscrepancyStats ComputeDiscrepancyStats(const std::vector<DiscrepancySample>& samples);

// Two numeric columns per line, separated by whitespace or a comma. Blank
// lines and lines starting with '#' are skipped. Throws InvalidArgument.
std::vector<DiscrepancySample> ParseSamples(const std::string& text);

std::string FormatStatsTable(const DiscrepancyStats& stats);

}  // namespace holoplan

#endif  // HOLOPLAN_STATS_H_
