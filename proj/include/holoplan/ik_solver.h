#ifndef HOLOPLAN_IK_SOLVER_H_
#define HOLOPLAN_IK_SOLVER_H_

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "holoplan/robot_model.h"
#include "holoplan/se3.h"

namespace holoplan {

using Vector6 = Eigen::Matrix<double, 6, 1>;

// Cartesian pose error: position part (m) then orientation part (rad,
// rotation vector of the shortest relative rotation).
struct PoseError {
  Vector6 twist = Vector6::Zero();
  double norm = 0.0;
};

PoseError ComputePoseError(const Pose& current, const Pose& desired);

struct IkConfig {
  double tolerance = 1e-4;             // combined m/rad pose-error norm
  double gradient_tolerance = 1e-8;
  int max_iterations = 1500;           // per attempt
  int stagnation_window = 20;
  int max_restarts = 10;
  double unreachable_threshold = 1e-2;
  std::uint64_t restart_seed = 0;

  // Throws InvalidConfig on non-positive tolerances or negative counts.
  void Validate() const;
};

enum class IkStatus { kConverged, kLocalMinimum, kUnreachable };

std::string_view IkStatusName(IkStatus s);

struct IkResult {
  JointVector q;
  double pose_error_norm = 0.0;
  int restarts_used = 0;
  int iterations = 0;  // summed over attempts
  IkStatus status = IkStatus::kUnreachable;
};

// Quasi-Newton minimization of the squared pose-error norm with joint limits
// enforced by projection. Restarts from seeded random configurations when a
// local minimum is detected; the best iterate over all attempts is returned.
IkResult SolveIk(const RobotModel& model, const Pose& target, const JointVector& seed_q,
                 const IkConfig& config = {});

// Squared pose-error objective and its exact gradient (-2 J^T e).
struct IkObjective {
  double value = 0.0;
  JointVector gradient;
  PoseError error;
};
IkObjective EvaluateIkObjective(const RobotModel& model, const Pose& target,
                                const JointVector& q);

enum class Reachability { kReachable, kUnreachable, kUncertain };

struct ReachabilityNotice {
  Reachability level = Reachability::kReachable;
  std::string message;
};

ReachabilityNotice ClassifyReachability(const IkResult& result);

}  // namespace holoplan

#endif  // HOLOPLAN_IK_SOLVER_H_
