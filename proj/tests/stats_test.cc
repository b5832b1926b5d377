#include "holoplan/stats.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "holoplan/error.h"

namespace holoplan {
namespace {

TEST(StatsTest, ZerosGiveZeros) {
  const DiscrepancyStats s = ComputeDiscrepancyStats({{0, 0}, {0, 0}, {0, 0}});
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(s.x.mean, 0.0);
  EXPECT_EQ(s.y.variance, 0.0);
  EXPECT_EQ(s.y.stddev, 0.0);
}

TEST(StatsTest, ReportedVariancesGiveReportedDeviations) {
  // Mean 1.0 / -1.2 mm, variance 25.5 / 19.9 mm^2.
  const DiscrepancyStats s = ComputeDiscrepancyStats({{7.0, -0.4}, {-5.0, -3.6}, {2.5, -5.5}, {-0.5, 4.7}});
  EXPECT_NEAR(s.x.mean, 1.0, 1e-12);
  EXPECT_NEAR(s.y.mean, -1.2, 1e-12);
  EXPECT_NEAR(s.x.variance, 25.5, 1e-12);
  EXPECT_NEAR(s.y.variance, 19.9, 1e-12);
  EXPECT_NEAR(s.x.stddev, std::sqrt(25.5), 1e-12);
  EXPECT_NEAR(s.x.stddev, 5.1, 0.1);
  EXPECT_NEAR(s.y.stddev, 4.5, 0.1);
  EXPECT_NEAR(s.x.stddev, 5.05, 0.005);
  EXPECT_NEAR(s.y.stddev, 4.46, 0.005);
}

TEST(StatsTest, SampleVarianceUsesNMinusOne) {
  const DiscrepancyStats s = ComputeDiscrepancyStats({{1, 0}, {3, 0}});
  EXPECT_DOUBLE_EQ(s.x.variance, 2.0);
}

TEST(StatsTest, RejectsTooFewOrNonFinite) {
  try {
    ComputeDiscrepancyStats({{1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ComputeDiscrepancyStats({{1, 2}, {nan, 0}}), Error);
}

TEST(ParseSamplesTest, AcceptsCommentsCommasAndWhitespace) {
  const auto rows = ParseSamples("# x y\n1.5 -2\n\n  3,4\n-0.5\t0.25\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], 3.0);
  EXPECT_EQ(rows[2][1], 0.25);
}

TEST(ParseSamplesTest, RejectsMalformedRows) {
  EXPECT_THROW(ParseSamples("1 2 3\n"), Error);
  EXPECT_THROW(ParseSamples("1\n"), Error);
  EXPECT_THROW(ParseSamples("a b\n"), Error);
}

TEST(StatsTest, TableMentionsBothAxes) {
  const std::string table = FormatStatsTable(ComputeDiscrepancyStats({{1, 0}, {3, 0}}));
  EXPECT_NE(table.find("x"), std::string::npos);
  EXPECT_NE(table.find("y"), std::string::npos);
}

}  // namespace
}  // namespace holoplan
