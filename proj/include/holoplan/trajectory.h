#ifndef HOLOPLAN_TRAJECTORY_H_
#define HOLOPLAN_TRAJECTORY_H_

#include <optional>
#include <string>
#include <vector>

#include "holoplan/error.h"
#include "holoplan/geometry.h"
#include "holoplan/ik_solver.h"
#include "holoplan/robot_model.h"
#include "holoplan/se3.h"
#include "holoplan/spline.h"

namespace holoplan {

inline constexpr double kDefaultDuration = 10.0;              // s
inline constexpr double kDefaultJointJumpThreshold = 0.35;    // rad between waypoints
inline constexpr double kDefaultAccelerationLimit = 2.0;      // rad/s^2

// An error tied to one waypoint of a schedule or trajectory.
class WaypointError : public Error {
 public:
  WaypointError(ErrorCode code, int index, const std::string& message)
      : Error(code, "waypoint " + std::to_string(index) + ": " + message), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

struct ToolSample {
  double time = 0.0;
  Pose pose;
  double fraction = 0.0;  // normalized arc length along the path
};

struct ToolSchedule {
  std::vector<ToolSample> samples;
};

// Positions from `timed`, orientation slerped from start to end by the
// arc-length fraction of each vertex, times uniform over [0, duration].
// Throws InvalidDuration, InvalidArgument (< 2 vertices).
ToolSchedule BuildToolSchedule(const TimedVertices& timed, const Quaternion& start_rot,
                               const Quaternion& end_rot, double duration = kDefaultDuration);

struct JointTrajectory {
  std::string model_name;
  std::vector<double> times;
  std::vector<JointVector> q;
  std::vector<JointVector> qdot;

  std::size_t size() const { return times.size(); }
};

struct TrajectoryOptions {
  double joint_jump_threshold = kDefaultJointJumpThreshold;
  // Configuration the arm starts from; the model's home when unset.
  std::optional<JointVector> initial_q;
};

// Solves IK per sample, each warm-started from the previous solution, and
// differentiates to joint rates. Throws WaypointError with codes
// WaypointUnreachable, JointJump, VelocityLimitExceeded.
JointTrajectory BuildJointTrajectory(const RobotModel& model, const ToolSchedule& schedule,
                                     const IkConfig& ik_config = {},
                                     const TrajectoryOptions& options = {});

// Central differences of `values` over `times`, one-sided at the ends.
std::vector<JointVector> Differentiate(const std::vector<double>& times,
                                       const std::vector<JointVector>& values);

enum class ViolationKind { kJointLimit, kVelocity, kAcceleration, kProtectionZone };

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kVelocity;
  int sample = 0;
  int joint = -1;        // -1 for protection zones
  std::string zone_id;   // protection zones only
  double value = 0.0;
  double limit = 0.0;

  std::string Describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string Summary() const;
};

struct ValidationLimits {
  double acceleration = kDefaultAccelerationLimit;  // rad/s^2, every joint
  double tolerance = 1e-9;
};

// Velocity, acceleration and joint-limit checks plus protection zones the tool
// point (base frame) must never enter. Pure.
ValidationReport ValidateTrajectory(const JointTrajectory& traj, const RobotModel& model,
                                    const std::vector<Obstacle>& zones,
                                    const ValidationLimits& limits = {});

inline constexpr const char* kTrajectorySchema = "holoplan-trajectory/1";

// Export file: {"schema", "model", "times", "q", "qdot"}. The text is a
// deterministic function of the trajectory.
std::string TrajectoryToJson(const JointTrajectory& traj);
JointTrajectory TrajectoryFromJson(const std::string& text);

}  // namespace holoplan

#endif  // HOLOPLAN_TRAJECTORY_H_
