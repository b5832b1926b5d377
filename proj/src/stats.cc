#include "holoplan/stats.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "holoplan/error.h"

namespace holoplan {

namespace {

AxisStats Summarize(const std::vector<DiscrepancySample>& samples, int axis) {
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (const auto& s : samples) sum += s[axis];
  AxisStats out;
  out.mean = sum / n;
  double squares = 0.0;
  for (const auto& s : samples) squares += (s[axis] - out.mean) * (s[axis] - out.mean);
  out.variance = squares / (n - 1.0);
  out.stddev = std::sqrt(out.variance);
  return out;
}

}  // namespace

DiscrepancyStats ComputeDiscrepancyStats(const std::vector<DiscrepancySample>& samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::kInsufficientSamples,
                "need at least 2 samples, got " + std::to_string(samples.size()));
  }
  for (const auto& s : samples) {
    if (!std::isfinite(s[0]) || !std::isfinite(s[1])) {
      throw Error(ErrorCode::kInvalidArgument, "samples must be finite");
    }
  }
  return {samples.size(), Summarize(samples, 0), Summarize(samples, 1)};
}

std::vector<DiscrepancySample> ParseSamples(const std::string& text) {
  std::vector<DiscrepancySample> out;
  std::istringstream lines(text);
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    DiscrepancySample s{};
    std::string extra;
    if (!(fields >> s[0] >> s[1]) || (fields >> extra)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line " + std::to_string(number) + ": expected two numbers");
    }
    out.push_back(s);
  }
  return out;
}

std::string FormatStatsTable(const DiscrepancyStats& stats) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "samples: %zu\n%-5s %12s %16s %12s\n", stats.count, "axis",
                "mean (mm)", "variance (mm^2)", "stddev (mm)");
  out += buf;
  for (const auto& [name, a] : {std::pair{"x", stats.x}, std::pair{"y", stats.y}}) {
    std::snprintf(buf, sizeof(buf), "%-5s %12.4f %16.4f %12.4f\n", name, a.mean, a.variance,
                  a.stddev);
    out += buf;
  }
  return out;
}

}  // namespace holoplan
