#include "holoplan/session.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "holoplan/error.h"
#include "support.h"

namespace holoplan {
namespace {

using S = SessionState;

std::filesystem::path SceneDir() { return testing::SourceDir() / "scenes"; }
Scene Golden() { return LoadSceneFile(SceneDir() / "pick_and_place.json"); }

int LowestCost(const Session& s) {
  const auto paths = s.candidates();
  return std::min_element(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
           return a.cost < b.cost;
         })->id;
}

std::vector<std::string> EventTypes(const Session& s) {
  std::vector<std::string> out;
  for (const auto& e : s.events().Since(0)) out.push_back(e.at("type"));
  return out;
}

TEST(StateMachineTest, LegalTransitions) {
  EXPECT_TRUE(IsLegalTransition(S::kIdle, S::kPlanning));
  EXPECT_TRUE(IsLegalTransition(S::kPlanning, S::kAwaitingSelection));
  EXPECT_TRUE(IsLegalTransition(S::kAwaitingSelection, S::kExecuting));
  EXPECT_TRUE(IsLegalTransition(S::kExecuting, S::kDone));
  EXPECT_TRUE(IsLegalTransition(S::kDone, S::kIdle));
  EXPECT_TRUE(IsLegalTransition(S::kFault, S::kIdle));
  for (S s : {S::kIdle, S::kPlanning, S::kAwaitingSelection, S::kExecuting, S::kDone}) {
    EXPECT_TRUE(IsLegalTransition(s, S::kFault));
  }
  EXPECT_FALSE(IsLegalTransition(S::kFault, S::kFault));
  EXPECT_FALSE(IsLegalTransition(S::kIdle, S::kExecuting));
  EXPECT_FALSE(IsLegalTransition(S::kExecuting, S::kPlanning));
  EXPECT_FALSE(IsLegalTransition(S::kDone, S::kExecuting));
  EXPECT_FALSE(IsLegalTransition(S::kPlanning, S::kIdle));
}

TEST(EventLogTest, SequencesAndWaiting) {
  EventLog log;
  EXPECT_EQ(log.Append({{"type", "a"}}), 1u);
  EXPECT_EQ(log.Append({{"type", "b"}}), 2u);
  EXPECT_EQ(log.Since(1).size(), 1u);
  EXPECT_EQ(log.Since(1)[0].at("seq"), 2);
  EXPECT_TRUE(log.WaitSince(2, std::chrono::milliseconds(10)).empty());
}

TEST(SessionTest, NothingBeforeAScene) {
  Session s("s1");
  EXPECT_EQ(s.state(), S::kIdle);
  EXPECT_THROW(s.Plan(), Error);
  EXPECT_THROW(s.Execute(), Error);
  EXPECT_THROW(s.ExportTrajectory(), Error);
}

TEST(SessionTest, GoldenPlanSelectConfirmExecute) {
  Session s("s1");
  s.PutScene(Golden(), SceneDir());
  const PlanOutcome outcome = s.Plan();
  EXPECT_EQ(s.state(), S::kAwaitingSelection);
  ASSERT_EQ(outcome.paths.size(), 4u);
  EXPECT_EQ(outcome.start_reachability.level, Reachability::kReachable);
  for (const auto& p : s.candidates()) EXPECT_EQ(p.waypoints.size(), 100u);

  EXPECT_THROW(s.Execute(), Error) << "execute without confirm";
  const int id = LowestCost(s);
  s.SelectPath(id);
  s.Confirm(id);
  ASSERT_TRUE(s.trajectory().has_value());
  EXPECT_EQ(s.trajectory()->size(), 100u);

  bool replan_rejected = false;
  const auto frames = s.Execute([&](double t) {
    if (t > 0.0 && !replan_rejected) {
      EXPECT_EQ(s.state(), S::kExecuting);
      try {
        s.BeginPlanning();
      } catch (const Error& e) {
        replan_rejected = e.code() == ErrorCode::kInvalidState;
      }
    }
  });
  EXPECT_TRUE(replan_rejected);
  EXPECT_EQ(s.state(), S::kDone);
  EXPECT_EQ(frames.size(), 101u);
  EXPECT_DOUBLE_EQ(frames.back().t, 10.0);
  const Scene scene = Golden();
  EXPECT_LT(ComputePoseError(frames.back().tool_world, scene.end).norm, 1e-4);
  EXPECT_LT(ComputePoseError(frames.front().tool_world, scene.start).norm, 1e-4);

  const auto events = s.events().Since(0);
  EXPECT_EQ(events.back().at("type"), "execution_frame");
  EXPECT_EQ(events.back().at("kind"), "done");
  const auto types = EventTypes(s);
  EXPECT_NE(std::find(types.begin(), types.end(), "candidates"), types.end());
  EXPECT_NE(std::find(types.begin(), types.end(), "confirmed"), types.end());
  for (std::size_t i = 0; i < events.size(); ++i) EXPECT_EQ(events[i].at("seq"), i + 1);

  // Same seeds, same bytes.
  Session again("s2");
  again.PutScene(Golden(), SceneDir());
  again.Plan();
  again.SelectPath(LowestCost(again));
  again.Confirm(LowestCost(again));
  EXPECT_EQ(again.ExportTrajectory(), s.ExportTrajectory());

  // A new scene from Done goes back to Idle.
  s.PutScene(Golden(), SceneDir());
  EXPECT_EQ(s.state(), S::kIdle);
}

TEST(SessionTest, MarkersArriveInWorldFrame) {
  Session s("s1");
  s.PutScene(Golden(), SceneDir());
  s.Plan(2, 7);
  const auto paths = s.candidates();
  const Transform world_from_base = Golden().CalibrationTransform().Inverse();
  const Vec3 moved = world_from_base.Apply(paths[1].waypoints[50]) + Vec3(0, 0, 0.03);
  s.EnqueueMarkers({{paths[1].id, 50, moved, 1}});
  const auto event = s.RunSelectionCycle();
  ASSERT_TRUE(event.has_value());
  EXPECT_EQ(event->selected_id, paths[1].id);
  EXPECT_LT((s.candidates()[1].waypoints[50] - Golden().CalibrationTransform().Apply(moved)).norm(), 1e-12);
  s.EnqueueMarkers({{paths[1].id, 50, moved, 1}});
  EXPECT_THROW(s.RunSelectionCycle(), Error);
  EXPECT_EQ(s.events().Since(0).back().at("level"), "rejected");
}

TEST(SessionTest, GoalInsideObstacleFaultsWithReasons) {
  Scene scene = Golden();
  // The camera box centre, written in world coordinates.
  scene.end.position = scene.CalibrationTransform().Inverse().Apply(Vec3(0.45, 0.0, 0.175));
  scene.planner.candidates = 2;
  Session s("s1");
  s.PutScene(scene, SceneDir());
  try {
    s.Plan();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlanningFailed);
    EXPECT_NE(std::string(e.what()).find("GoalInCollision"), std::string::npos);
  }
  EXPECT_EQ(s.state(), S::kFault);
  s.PutScene(Golden(), SceneDir());
  EXPECT_EQ(s.state(), S::kIdle);
}

TEST(SessionTest, ProtectionZoneOnAWaypointFaultsExecution) {
  // Find where the golden trajectory passes, then fence that spot.
  Session probe("probe");
  probe.PutScene(Golden(), SceneDir());
  probe.Plan();
  probe.SelectPath(LowestCost(probe));
  probe.Confirm(LowestCost(probe));
  const JointTrajectory t = *probe.trajectory();
  const RobotModel arm = LoadSceneModel(Golden(), SceneDir());
  const Vec3 base_point = ForwardKinematics(arm, t.q[t.size() / 2]).position;

  Scene fenced = Golden();
  Obstacle zone{"operator_keepout", Sphere{fenced.CalibrationTransform().Inverse().Apply(base_point), 0.01}, 0.0};
  fenced.protection_zones.push_back(zone);
  Session s("s1");
  s.PutScene(fenced, SceneDir());
  s.Plan();
  s.SelectPath(LowestCost(s));
  s.Confirm(LowestCost(s));
  try {
    s.Execute();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidationFailed);
    EXPECT_NE(std::string(e.what()).find("operator_keepout"), std::string::npos);
  }
  EXPECT_EQ(s.state(), S::kFault);
  const auto last = s.events().Since(0);
  bool fault_frame = false;
  for (const auto& e : last) {
    fault_frame = fault_frame || (e.at("type") == "execution_frame" && e.at("kind") == "fault");
  }
  EXPECT_TRUE(fault_frame);
}

}  // namespace
}  // namespace holoplan
