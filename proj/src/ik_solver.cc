#include "holoplan/ik_solver.h"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "holoplan/error.h"

namespace holoplan {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxLineSearchSteps = 40;
// A step "improves" only if it lowers the best objective by this fraction.
constexpr double kImprovementFraction = 1e-9;

struct Attempt {
  JointVector q;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

class Minimizer {
 public:
  Minimizer(const RobotModel& model, const Pose& target, const IkConfig& config)
      : model_(model),
        target_(target),
        config_(config),
        lower_(model.LowerLimits()),
        upper_(model.UpperLimits()) {}

  Attempt Run(const JointVector& start) const {
    const int n = model_.dof();
    JointVector q = model_.Project(start);
    IkObjective obj = EvaluateIkObjective(model_, target_, q);
    Attempt best{q, obj.value, 0};

    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    bool h_is_identity = true;
    bool scaled = false;
    int stagnant = 0;
    const double tol_sq = config_.tolerance * config_.tolerance;

    for (int it = 0; it < config_.max_iterations; ++it) {
      best.iterations = it;
      if (obj.value <= tol_sq) break;

      // Coordinates pinned at a bound with the gradient pushing outward are
      // removed from the quasi-Newton step.
      Eigen::VectorXd free = Eigen::VectorXd::Ones(n);
      for (int i = 0; i < n; ++i) {
        if (model_.joints()[i].continuous) continue;
        if ((q[i] <= lower_[i] && obj.gradient[i] > 0.0) ||
            (q[i] >= upper_[i] && obj.gradient[i] < 0.0)) {
          free[i] = 0.0;
        }
      }
      const Eigen::VectorXd pg = obj.gradient.cwiseProduct(free);
      if (pg.norm() < config_.gradient_tolerance) break;

      const Eigen::MatrixXd hf = free.asDiagonal() * h * free.asDiagonal();
      Eigen::VectorXd d = -(hf * obj.gradient);
      if (!(obj.gradient.dot(d) < 0.0)) {
        h.setIdentity();
        h_is_identity = true;
        d = -pg;
      }

      JointVector q_next;
      IkObjective next;
      bool accepted = false;
      double alpha = 1.0;
      for (int ls = 0; ls < kMaxLineSearchSteps; ++ls, alpha *= 0.5) {
        q_next = model_.Project(q + alpha * d);
        const Eigen::VectorXd s = q_next - q;
        if (s.squaredNorm() == 0.0) break;
        next = EvaluateIkObjective(model_, target_, q_next);
        if (next.value <= obj.value + kArmijo * obj.gradient.dot(s)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (h_is_identity) break;  // steepest descent cannot make progress
        h.setIdentity();
        h_is_identity = true;
        if (++stagnant >= config_.stagnation_window) break;
        continue;
      }

      const Eigen::VectorXd s = q_next - q;
      const Eigen::VectorXd y = next.gradient - obj.gradient;
      const double sy = s.dot(y);
      if (sy > 1e-12 * s.norm() * y.norm()) {
        if (!scaled) {
          h *= sy / y.squaredNorm();
          scaled = true;
        }
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) - rho * y * s.transpose();
        h = v.transpose() * h * v + rho * s * s.transpose();
        h_is_identity = false;
      }

      q = q_next;
      obj = std::move(next);
      if (obj.value < best.value * (1.0 - kImprovementFraction)) {
        best.q = q;
        best.value = obj.value;
        stagnant = 0;
      } else if (++stagnant >= config_.stagnation_window) {
        break;
      }
    }
    if (obj.value < best.value) {
      best.q = q;
      best.value = obj.value;
    }
    return best;
  }

 private:
  const RobotModel& model_;
  const Pose& target_;
  const IkConfig& config_;
  JointVector lower_;
  JointVector upper_;
};

}  // namespace

PoseError ComputePoseError(const Pose& current, const Pose& desired) {
  PoseError e;
  e.twist.head<3>() = desired.position - current.position;
  const Quaternion rel = desired.orientation * current.orientation.Conjugate();
  e.twist.tail<3>() = rel.ToRotationVector();
  e.norm = e.twist.norm();
  return e;
}

void IkConfig::Validate() const {
  if (!(tolerance > 0.0) || !(gradient_tolerance > 0.0) || !(unreachable_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "IK tolerances must be positive");
  }
  if (max_iterations <= 0 || stagnation_window <= 0 || max_restarts < 0) {
    throw Error(ErrorCode::kInvalidConfig, "IK iteration counts must be positive");
  }
}

std::string_view IkStatusName(IkStatus s) {
  switch (s) {
    case IkStatus::kConverged: return "converged";
    case IkStatus::kLocalMinimum: return "local_minimum";
    case IkStatus::kUnreachable: return "unreachable";
  }
  return "unknown";
}

IkObjective EvaluateIkObjective(const RobotModel& model, const Pose& target,
                                const JointVector& q) {
  IkObjective out;
  out.error = ComputePoseError(ForwardKinematics(model, q), target);
  out.value = out.error.twist.squaredNorm();
  // d/dq of |e_p|^2 is -2 Jv^T e_p. For the rotation vector phi of
  // R_d R_c^T, phi^T dphi = -phi^T omega, so the angular part is -2 Jw^T phi.
  out.gradient = -2.0 * ComputeJacobian(model, q).transpose() * out.error.twist;
  return out;
}

IkResult SolveIk(const RobotModel& model, const Pose& target, const JointVector& seed_q,
                 const IkConfig& config) {
  config.Validate();
  if (seed_q.size() != model.dof()) {
    throw Error(ErrorCode::kDimensionMismatch, "seed has " + std::to_string(seed_q.size()) +
                                                   " joints, model has " +
                                                   std::to_string(model.dof()));
  }

  IkResult result;
  const Minimizer minimizer(model, target, config);

  if (target.position.norm() > model.ReachBound()) {
    result.q = model.Project(seed_q);
    result.pose_error_norm =
        ComputePoseError(ForwardKinematics(model, result.q), target).norm;
    result.status = IkStatus::kUnreachable;
    return result;
  }

  Attempt best = minimizer.Run(seed_q);
  result.iterations = best.iterations;
  const double tol_sq = config.tolerance * config.tolerance;
  for (int r = 1; r <= config.max_restarts && best.value > tol_sq; ++r) {
    const Attempt attempt =
        minimizer.Run(SampleConfiguration(model, config.restart_seed + static_cast<std::uint64_t>(r)));
    result.iterations += attempt.iterations;
    result.restarts_used = r;
    if (attempt.value < best.value) best = attempt;  // ties keep the earlier attempt
  }

  result.q = best.q;
  result.pose_error_norm = std::sqrt(best.value);
  if (result.pose_error_norm <= config.tolerance) {
    result.status = IkStatus::kConverged;
  } else if (result.pose_error_norm > config.unreachable_threshold) {
    result.status = IkStatus::kUnreachable;
  } else {
    result.status = IkStatus::kLocalMinimum;
  }
  return result;
}

ReachabilityNotice ClassifyReachability(const IkResult& result) {
  switch (result.status) {
    case IkStatus::kConverged:
      return {Reachability::kReachable, "reachable"};
    case IkStatus::kUnreachable:
      return {Reachability::kUnreachable, "unreachable: adjust start pose"};
    case IkStatus::kLocalMinimum:
      return {Reachability::kUncertain, "uncertain: retry or move target"};
  }
  return {Reachability::kUncertain, "uncertain: retry or move target"};
}

}  // namespace holoplan
