#ifndef HOLOPLAN_ROBOT_MODEL_H_
#define HOLOPLAN_ROBOT_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "holoplan/se3.h"

namespace holoplan {

using JointVector = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

inline constexpr double kDefaultJointVelocityLimit = 1.0;  // rad/s

struct JointDescriptor {
  std::string name;
  Vec3 axis = Vec3::UnitZ();        // unit, in the joint frame
  Transform origin;                 // parent link frame -> joint frame at q = 0
  double lower = 0.0;               // rad
  double upper = 0.0;               // rad
  double velocity_limit = kDefaultJointVelocityLimit;  // rad/s
  // Unbounded rotation; [lower, upper] must span at least one full turn and
  // projection wraps instead of clamping.
  bool continuous = false;
};

// Serial chain of revolute joints. Immutable after construction; FK and
// Jacobian are safe to call concurrently.
class RobotModel {
 public:
  // Throws InvalidModel on an empty chain, a zero axis or lower > upper.
  RobotModel(std::string name, std::vector<JointDescriptor> joints, Transform tool_offset,
             JointVector home = {});

  // Loads the JSON model file format documented in docs/robot_model.md.
  // `expected_dof` of 0 accepts any joint count.
  static RobotModel FromJson(const std::string& text, int expected_dof = 7);
  static RobotModel Load(const std::filesystem::path& path, int expected_dof = 7);
  // The shipped Gen3-like 7-DOF model (models/gen3.json).
  static RobotModel LoadDefault();

  const std::string& name() const { return name_; }
  int dof() const { return static_cast<int>(joints_.size()); }
  const std::vector<JointDescriptor>& joints() const { return joints_; }
  const Transform& tool_offset() const { return tool_offset_; }
  // Configuration the arm is assumed to rest in before a task.
  const JointVector& home() const { return home_; }

  JointVector LowerLimits() const;
  JointVector UpperLimits() const;
  JointVector VelocityLimits() const;
  bool WithinLimits(const JointVector& q, double tol = 0.0) const;
  JointVector Clamp(const JointVector& q) const;
  // Clamp for bounded joints, wrap by whole turns for continuous ones. The
  // result is within limits and, for in-limit input, has the same FK.
  JointVector Project(const JointVector& q) const;

  // Upper bound on the distance from the base origin to the tool point.
  double ReachBound() const;

 private:
  std::string name_;
  std::vector<JointDescriptor> joints_;
  Transform tool_offset_;
  JointVector home_;
};

// Tool pose in the base frame. Throws DimensionMismatch.
Pose ForwardKinematics(const RobotModel& model, const JointVector& q);
Transform ForwardKinematicsTransform(const RobotModel& model, const JointVector& q);

// Geometric Jacobian: rows 0-2 map joint rates to tool-point linear velocity
// (m/s), rows 3-5 to angular velocity (rad/s), both in the base frame.
Jacobian ComputeJacobian(const RobotModel& model, const JointVector& q);

// Uniform sample inside the joint limits, deterministic for a given seed.
JointVector SampleConfiguration(const RobotModel& model, std::uint64_t seed);

}  // namespace holoplan

#endif  // HOLOPLAN_ROBOT_MODEL_H_
