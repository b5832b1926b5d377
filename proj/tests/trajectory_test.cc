#include "holoplan/trajectory.h"

#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support.h"

namespace holoplan {
namespace {

const Quaternion kDown = Quaternion::FromAxisAngle(Vec3::UnitX(), M_PI);

TimedVertices StraightTimed(const Vec3& a, const Vec3& b, int n) {
  std::vector<Vec3> line;
  for (int i = 0; i <= 50; ++i) line.push_back(a + (b - a) * (i / 50.0));
  return CosineReparameterize(line, n);
}

TEST(ToolScheduleTest, ConstantOrientationWhenStartEqualsEnd) {
  const ToolSchedule s = BuildToolSchedule(StraightTimed({0, 0, 0}, {1, 0, 0}, 20), kDown, kDown, 4.0);
  ASSERT_EQ(s.samples.size(), 20u);
  for (const auto& p : s.samples) EXPECT_TRUE(SameRotation(p.pose.orientation, kDown, 1e-12));
  EXPECT_EQ(s.samples.front().time, 0.0);
  EXPECT_EQ(s.samples.back().time, 4.0);
}

TEST(ToolScheduleTest, EndpointsAndGeodesicMidpoint) {
  const Quaternion end = Quaternion::FromAxisAngle(Vec3::UnitZ(), M_PI / 2);
  const ToolSchedule s =
      BuildToolSchedule(StraightTimed({0, 0, 0}, {1, 0, 0}, 101), Quaternion::Identity(), end);
  EXPECT_TRUE(SameRotation(s.samples.front().pose.orientation, Quaternion::Identity(), 1e-9));
  EXPECT_TRUE(SameRotation(s.samples.back().pose.orientation, end, 1e-9));
  const ToolSample& mid = s.samples[50];
  EXPECT_NEAR(mid.fraction, 0.5, 1e-12);
  EXPECT_TRUE(SameRotation(mid.pose.orientation, Quaternion::FromAxisAngle(Vec3::UnitZ(), M_PI / 4), 1e-9));
}

TEST(ToolScheduleProperty, AngularStepProportionalToArcStep) {
  const Quaternion start = Quaternion::FromAxisAngle({1, 1, 0}, 0.3);
  const Quaternion end = Quaternion::FromAxisAngle({0, 1, 1}, 1.9);
  const double total = AngleBetween(start, end);
  const ToolSchedule s = BuildToolSchedule(StraightTimed({0, 0, 0}, {0.5, 0.5, 0}, 100), start, end);
  for (std::size_t k = 1; k < s.samples.size(); ++k) {
    const auto& a = s.samples[k - 1];
    const auto& b = s.samples[k];
    EXPECT_NEAR(b.pose.orientation.Norm(), 1.0, 1e-12);
    EXPECT_NEAR(AngleBetween(a.pose.orientation, b.pose.orientation), total * (b.fraction - a.fraction), 1e-6);
    EXPECT_GT(b.time, a.time);
  }
}

TEST(ToolScheduleTest, RejectsNonPositiveDuration) {
  try {
    BuildToolSchedule(StraightTimed({0, 0, 0}, {1, 0, 0}, 5), kDown, kDown, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDuration);
  }
}

class JointTrajectoryTest : public ::testing::Test {
 protected:
  RobotModel arm_ = RobotModel::LoadDefault();

  ToolSchedule Straight(const Vec3& a, const Vec3& b) {
    return BuildToolSchedule(StraightTimed(a, b, 100), kDown, kDown);
  }
};

TEST_F(JointTrajectoryTest, RepeatedPoseGivesConstantQAndZeroRate) {
  ToolSchedule s;
  for (int k = 0; k < 10; ++k) s.samples.push_back({k * 0.5, {{0.45, 0.0, 0.2}, kDown}, k / 9.0});
  const JointTrajectory t = BuildJointTrajectory(arm_, s);
  ASSERT_EQ(t.size(), 10u);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_LT((t.q[k] - t.q[0]).norm(), 1e-12);
    EXPECT_LT(t.qdot[k].norm(), 1e-12);
  }
}

TEST_F(JointTrajectoryTest, StraightLineTracksScheduleWithQuietEnds) {
  const ToolSchedule s = Straight({0.45, -0.25, 0.15}, {0.45, 0.25, 0.15});
  const JointTrajectory t = BuildJointTrajectory(arm_, s);
  ASSERT_EQ(t.size(), s.samples.size());
  double interior_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_EQ(t.times[k], s.samples[k].time);
    EXPECT_TRUE(arm_.WithinLimits(t.q[k]));
    EXPECT_LT(ComputePoseError(ForwardKinematics(arm_, t.q[k]), s.samples[k].pose).norm, 1e-4);
    if (k > 0 && k + 1 < t.size()) interior_min = std::min(interior_min, t.qdot[k].norm());
  }
  const double n = static_cast<double>(t.size());
  const double boundary = CosineFractionAt(1, static_cast<int>(n) - 1) * (n - 1);
  EXPECT_LE(t.qdot.front().norm(), 10 * std::max(interior_min, 1e-12) + 10 * boundary);
  EXPECT_LT(t.qdot.front().norm(), 0.1 * t.qdot[t.size() / 2].norm());
  EXPECT_LT(t.qdot.back().norm(), 0.1 * t.qdot[t.size() / 2].norm());
  EXPECT_TRUE(ValidateTrajectory(t, arm_, {}).ok());
}

TEST(JointTrajectorySweep, RecoversGeneratingJointsOnNonRedundantArm) {
  const RobotModel arm = testing::LockedJoint3Model();
  JointVector q0(6), dir(6);
  q0 << 0.1, 0.5, 1.6, 0.2, 1.0, -0.3;
  dir << 0.4, 0.2, -0.3, 0.3, 0.25, 0.5;
  constexpr int kSamples = 101;
  std::vector<JointVector> truth;
  ToolSchedule s;
  for (int k = 0; k < kSamples; ++k) {
    const double u = static_cast<double>(k) / (kSamples - 1);
    truth.push_back(q0 + dir * std::sin(M_PI * u));
    s.samples.push_back({10.0 * u, ForwardKinematics(arm, truth.back()), u});
  }
  IkConfig ik;
  ik.tolerance = 1e-8;
  TrajectoryOptions options;
  options.initial_q = q0;
  const JointTrajectory t = BuildJointTrajectory(arm, s, ik, options);
  for (int k = 0; k < kSamples; ++k) {
    EXPECT_LT((t.q[k] - truth[k]).cwiseAbs().maxCoeff(), 1e-3) << "sample " << k;
  }
}

TEST_F(JointTrajectoryTest, OutOfReachSampleReportsItsIndex) {
  ToolSchedule s = Straight({0.45, -0.25, 0.15}, {0.45, 0.25, 0.15});
  s.samples[37].pose.position = {3.0, 0.0, 0.2};
  try {
    BuildJointTrajectory(arm_, s);
    FAIL();
  } catch (const WaypointError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWaypointUnreachable);
    EXPECT_EQ(e.index(), 37);
  }
}

TEST_F(JointTrajectoryTest, ValidationPassesStationaryAndFlagsZonesAndSpeed) {
  JointTrajectory still;
  still.model_name = arm_.name();
  for (int k = 0; k < 5; ++k) {
    still.times.push_back(k);
    still.q.push_back(arm_.home());
    still.qdot.push_back(JointVector::Zero(7));
  }
  EXPECT_TRUE(ValidateTrajectory(still, arm_, {}).ok());

  const JointTrajectory t = BuildJointTrajectory(arm_, Straight({0.45, -0.25, 0.15}, {0.45, 0.25, 0.15}));
  const int mid = static_cast<int>(t.size()) / 2;
  const Vec3 p = ForwardKinematics(arm_, t.q[mid]).position;
  const Obstacle zone{"fixture", Sphere{p, 0.01}, 0.0};
  const ValidationReport report = ValidateTrajectory(t, arm_, {zone});
  ASSERT_FALSE(report.ok());
  bool named = false;
  for (const auto& v : report.violations) {
    EXPECT_EQ(v.kind, ViolationKind::kProtectionZone);
    EXPECT_EQ(v.zone_id, "fixture");
    named = named || v.sample == mid;
  }
  EXPECT_TRUE(named);
  EXPECT_NE(report.Summary().find("fixture"), std::string::npos);
  // Pure: identical report on a second call.
  EXPECT_EQ(ValidateTrajectory(t, arm_, {zone}).Summary(), report.Summary());

  // A constant-rate sweep: every sample moves, so scaling breaches everywhere.
  JointTrajectory fast;
  for (int k = 0; k < 50; ++k) {
    fast.times.push_back(0.1 * k);
    fast.q.push_back(arm_.home() + JointVector::Constant(7, 0.05 * 0.1 * k));
    fast.qdot.push_back(JointVector::Constant(7, 0.05));
  }
  ASSERT_TRUE(ValidateTrajectory(fast, arm_, {}).ok());
  for (auto& v : fast.qdot) v *= 100.0;
  const ValidationReport speed = ValidateTrajectory(fast, arm_, {});
  std::vector<bool> hit(fast.size(), false);
  for (const auto& v : speed.violations) {
    if (v.kind == ViolationKind::kVelocity) hit[v.sample] = true;
  }
  for (std::size_t k = 1; k + 1 < fast.size(); ++k) EXPECT_TRUE(hit[k]) << "sample " << k;
}

TEST(DifferentiateTest, CentralInteriorOneSidedEnds) {
  std::vector<double> times{0, 1, 3};
  std::vector<JointVector> values;
  for (double x : {0.0, 1.0, 9.0}) values.push_back(JointVector::Constant(1, x));
  const auto d = Differentiate(times, values);
  EXPECT_DOUBLE_EQ(d[0][0], 1.0);
  EXPECT_DOUBLE_EQ(d[1][0], 3.0);
  EXPECT_DOUBLE_EQ(d[2][0], 4.0);
}

TEST_F(JointTrajectoryTest, JsonRoundTripIsExactAndStable) {
  const JointTrajectory t = BuildJointTrajectory(arm_, Straight({0.45, -0.1, 0.2}, {0.45, 0.1, 0.2}));
  const std::string text = TrajectoryToJson(t);
  const auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc.at("schema"), kTrajectorySchema);
  EXPECT_EQ(doc.at("model"), arm_.name());
  const JointTrajectory back = TrajectoryFromJson(text);
  EXPECT_EQ(back.times, t.times);
  ASSERT_EQ(back.q.size(), t.q.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_EQ(back.q[k], t.q[k]);
    EXPECT_EQ(back.qdot[k], t.qdot[k]);
  }
  EXPECT_EQ(TrajectoryToJson(back), text);
}

}  // namespace
}  // namespace holoplan
