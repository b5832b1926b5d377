#include "holoplan/rrt_star.h"

#include <chrono>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "holoplan/error.h"
#include "support.h"

namespace holoplan {
namespace {

using testing::EmptyWorkspace;
using testing::GapWorkspace;
using testing::kEmptyGoal;
using testing::kEmptyStart;
using testing::kGapGoal;
using testing::kGapStart;

void ExpectCollisionFree(const std::vector<Vec3>& path, const Workspace& ws) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    EXPECT_TRUE(ws.SegmentFree(path[i], path[i + 1])) << "segment " << i;
  }
}

TEST(RrtStarTest, TreeCostsMatchParentChainsAndBestCostNeverRises) {
  const Workspace ws = GapWorkspace();
  PlannerSettings settings;
  RrtStarPlanner planner(kGapStart, kGapGoal, ws, settings, 3);
  double best = std::numeric_limits<double>::infinity();
  while (planner.iterations() < 1500) {
    planner.Step();
    EXPECT_LE(planner.best_cost(), best + 1e-12);
    best = planner.best_cost();
    if (planner.iterations() % 250 != 0) continue;
    const auto& nodes = planner.nodes();
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      double cost = 0.0;
      for (int c = static_cast<int>(n); nodes[c].parent >= 0; c = nodes[c].parent) {
        cost += (nodes[c].position - nodes[nodes[c].parent].position).norm();
      }
      ASSERT_NEAR(nodes[n].cost, cost, 1e-9) << "node " << n;
    }
  }
}

TEST(RrtStarTest, EmptySceneNearStraightLine) {
  const Workspace ws = EmptyWorkspace();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CandidatePath p = PlanRrtStar(kEmptyStart, kEmptyGoal, ws, {}, seed);
    EXPECT_LE(p.cost, 1.05 * 0.4) << "seed " << seed;
    EXPECT_EQ(p.waypoints.front(), kEmptyStart);
    EXPECT_EQ(p.waypoints.back(), kEmptyGoal);
    EXPECT_NEAR(p.cost, PolylineLength(p.waypoints), 1e-9);
    ExpectCollisionFree(p.waypoints, ws);
  }
}

TEST(RrtStarTest, GapSceneWithinFifteenPercentOfGridOracle) {
  const Workspace ws = GapWorkspace();
  const double oracle = testing::GridDijkstra(ws, kGapStart, kGapGoal, 0.01);
  ASSERT_TRUE(std::isfinite(oracle));
  const CandidatePath p = PlanRrtStar(kGapStart, kGapGoal, ws, {}, 1);
  EXPECT_LE(p.cost, 1.15 * oracle);
  ExpectCollisionFree(p.waypoints, ws);
  bool through_gap = false;
  for (std::size_t i = 0; i + 1 < p.waypoints.size(); ++i) {
    const Vec3& a = p.waypoints[i];
    const Vec3& b = p.waypoints[i + 1];
    if ((a.y() - 0.5) * (b.y() - 0.5) <= 0.0) {
      const double t = (0.5 - a.y()) / (b.y() - a.y());
      const double x = a.x() + t * (b.x() - a.x());
      through_gap = x > 0.6 && x < 0.8;
    }
  }
  EXPECT_TRUE(through_gap);
}

TEST(RrtStarTest, BitwiseDeterministicPerSeed) {
  const Workspace ws = GapWorkspace();
  const CandidatePath a = PlanRrtStar(kGapStart, kGapGoal, ws, {}, 9);
  const CandidatePath b = PlanRrtStar(kGapStart, kGapGoal, ws, {}, 9);
  ASSERT_EQ(a.waypoints.size(), b.waypoints.size());
  for (std::size_t i = 0; i < a.waypoints.size(); ++i) EXPECT_EQ(a.waypoints[i], b.waypoints[i]);
  EXPECT_EQ(a.cost, b.cost);
}

TEST(RrtStarTest, EndpointsInCollision) {
  Workspace ws = EmptyWorkspace();
  ws.obstacles.push_back({"blocker", Sphere{kEmptyGoal, 0.05}, 0.0});
  try {
    PlanRrtStar(kEmptyStart, kEmptyGoal, ws, {}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGoalInCollision);
  }
  try {
    PlanRrtStar(kEmptyGoal, kEmptyStart, ws, {}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStartInCollision);
  }
}

TEST(RrtStarTest, TinyBudgetFailsWithPlanningFailed) {
  PlannerSettings settings;
  settings.max_iterations = 3;
  settings.goal_bias = 0.0;
  try {
    PlanRrtStar(kGapStart, kGapGoal, GapWorkspace(), settings, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlanningFailed);
  }
}

double SecondsFor(int iterations) {
  PlannerSettings settings;
  settings.max_iterations = iterations;
  const auto t0 = std::chrono::steady_clock::now();
  PlanRrtStar(kEmptyStart, kEmptyGoal, EmptyWorkspace(), settings, 1);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TEST(RrtStarTest, DoublingIterationsAtMostTwoAndAHalfTimesSlower) {
  // Interleaved best-of-7 keeps a noisy host from skewing one size only.
  double base = std::numeric_limits<double>::infinity();
  double doubled = base;
  for (int rep = 0; rep < 7; ++rep) {
    base = std::min(base, SecondsFor(4000));
    doubled = std::min(doubled, SecondsFor(8000));
  }
  const double ratio = doubled / base;
  EXPECT_LE(ratio, 2.5);
  RecordProperty("scaling_ratio", std::to_string(ratio));
}

TEST(GenerateCandidatesTest, SingleRunMatchesDirectPlan) {
  const Workspace ws = EmptyWorkspace();
  const CandidateBatch batch = GenerateCandidates(kEmptyStart, kEmptyGoal, ws, {}, 5, 1);
  const CandidatePath direct = PlanRrtStar(kEmptyStart, kEmptyGoal, ws, {}, 5);
  ASSERT_EQ(batch.paths.size(), 1u);
  EXPECT_EQ(batch.paths[0].id, 1);
  EXPECT_EQ(batch.paths[0].waypoints, direct.waypoints);
}

TEST(GenerateCandidatesTest, FourRunsAreDistinctAndOrdered) {
  const Workspace ws = EmptyWorkspace();
  const CandidateBatch batch = GenerateCandidates(kEmptyStart, kEmptyGoal, ws, {}, 1, 4);
  ASSERT_EQ(batch.paths.size(), 4u);
  std::set<double> costs;
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(batch.paths[i].id, i + 1);
    EXPECT_EQ(batch.paths[i].seed, 1u + i);
    EXPECT_EQ(batch.paths[i].status, PathStatus::kProposed);
    ExpectCollisionFree(batch.paths[i].waypoints, ws);
    costs.insert(batch.paths[i].cost);
  }
  EXPECT_EQ(costs.size(), 4u);
}

TEST(GenerateCandidatesTest, AllRunsFailReportsEachRun) {
  Workspace ws = EmptyWorkspace();
  ws.obstacles.push_back({"blocker", Sphere{kEmptyGoal, 0.05}, 0.0});
  try {
    GenerateCandidates(kEmptyStart, kEmptyGoal, ws, {}, 1, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllRunsFailed);
    EXPECT_NE(std::string(e.what()).find("run 3 (seed 4)"), std::string::npos);
  }
}

TEST(PlannerSettingsTest, RejectsBadValues) {
  PlannerSettings s;
  s.goal_bias = 1.5;
  EXPECT_THROW(s.Validate(), Error);
  s = {};
  s.candidates = 0;
  EXPECT_THROW(s.Validate(), Error);
  s = {};
  s.step = -1;
  EXPECT_THROW(s.Validate(), Error);
}

TEST(PathStatusTest, NamesRoundTrip) {
  for (auto s : {PathStatus::kProposed, PathStatus::kSelected, PathStatus::kDiscarded,
                 PathStatus::kExecuted}) {
    EXPECT_EQ(ParsePathStatus(PathStatusName(s)), s);
  }
  EXPECT_FALSE(ParsePathStatus("bogus").has_value());
}

}  // namespace
}  // namespace holoplan
