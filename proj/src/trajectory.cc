#include "holoplan/trajectory.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace holoplan {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * M_PI;

// For continuous joints, picks the whole-turn equivalent of q closest to
// `previous` that still lies within the limits.
JointVector Unwrap(const RobotModel& model, const JointVector& q, const JointVector& previous) {
  JointVector out = q;
  for (int i = 0; i < model.dof(); ++i) {
    const JointDescriptor& j = model.joints()[i];
    if (!j.continuous) continue;
    const double turns = std::round((previous[i] - q[i]) / kTwoPi);
    const double candidate = q[i] + turns * kTwoPi;
    if (candidate >= j.lower && candidate <= j.upper) out[i] = candidate;
  }
  return out;
}

}  // namespace

ToolSchedule BuildToolSchedule(const TimedVertices& timed, const Quaternion& start_rot,
                               const Quaternion& end_rot, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorCode::kInvalidDuration, "duration must be positive and finite");
  }
  const std::size_t n = timed.points.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "schedule needs at least 2 vertices");

  std::vector<double> cumulative(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    cumulative[k] = cumulative[k - 1] + (timed.points[k] - timed.points[k - 1]).norm();
  }
  const double total = cumulative.back();
  const bool has_fractions = timed.fractions.size() == n;

  ToolSchedule schedule;
  schedule.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s;
    if (k + 1 == n) {
      s = 1.0;
    } else if (total > 0.0) {
      s = cumulative[k] / total;
    } else {
      s = has_fractions ? timed.fractions[k] : static_cast<double>(k) / (n - 1);
    }
    ToolSample sample;
    sample.time = k + 1 == n ? duration : duration * static_cast<double>(k) / (n - 1);
    sample.fraction = s;
    sample.pose.position = timed.points[k];
    sample.pose.orientation = k == 0 ? start_rot : k + 1 == n ? end_rot : Slerp(start_rot, end_rot, s);
    schedule.samples.push_back(sample);
  }
  return schedule;
}

std::vector<JointVector> Differentiate(const std::vector<double>& times,
                                       const std::vector<JointVector>& values) {
  const std::size_t n = values.size();
  std::vector<JointVector> rates(n);
  if (n == 0) return rates;
  if (n == 1) {
    rates[0] = JointVector::Zero(values[0].size());
    return rates;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? n - 1 : k + 1;
    rates[k] = (values[hi] - values[lo]) / (times[hi] - times[lo]);
  }
  return rates;
}

JointTrajectory BuildJointTrajectory(const RobotModel& model, const ToolSchedule& schedule,
                                     const IkConfig& ik_config,
                                     const TrajectoryOptions& options) {
  ik_config.Validate();
  const auto& samples = schedule.samples;
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "empty tool schedule");
  for (std::size_t k = 1; k < samples.size(); ++k) {
    if (!(samples[k].time > samples[k - 1].time)) {
      throw Error(ErrorCode::kInvalidDuration, "schedule times must be strictly increasing");
    }
  }

  JointVector seed = options.initial_q.value_or(model.home());
  if (seed.size() != model.dof()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial configuration has wrong length");
  }
  seed = model.Project(seed);

  JointTrajectory traj;
  traj.model_name = model.name();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const int index = static_cast<int>(k);
    const IkResult r = SolveIk(model, samples[k].pose, seed, ik_config);
    if (r.status != IkStatus::kConverged) {
      std::ostringstream msg;
      msg << "IK " << IkStatusName(r.status) << " with pose error " << r.pose_error_norm;
      throw WaypointError(ErrorCode::kWaypointUnreachable, index, msg.str());
    }
    JointVector q = Unwrap(model, r.q, seed);
    if (k > 0) {
      const JointVector step = (q - traj.q.back()).cwiseAbs();
      Eigen::Index joint = 0;
      const double jump = step.maxCoeff(&joint);
      if (jump > options.joint_jump_threshold) {
        std::ostringstream msg;
        msg << "joint " << joint << " moves " << jump << " rad (limit "
            << options.joint_jump_threshold << ")";
        throw WaypointError(ErrorCode::kJointJump, index, msg.str());
      }
    }
    traj.times.push_back(samples[k].time);
    traj.q.push_back(q);
    seed = q;
  }

  traj.qdot = Differentiate(traj.times, traj.q);
  const JointVector vmax = model.VelocityLimits();
  for (std::size_t k = 0; k < traj.qdot.size(); ++k) {
    for (int i = 0; i < model.dof(); ++i) {
      if (std::abs(traj.qdot[k][i]) > vmax[i]) {
        std::ostringstream msg;
        msg << "joint " << i << " rate " << traj.qdot[k][i] << " rad/s exceeds " << vmax[i];
        throw WaypointError(ErrorCode::kVelocityLimitExceeded, static_cast<int>(k), msg.str());
      }
    }
  }
  return traj;
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kJointLimit: return "joint_limit";
    case ViolationKind::kVelocity: return "velocity";
    case ViolationKind::kAcceleration: return "acceleration";
    case ViolationKind::kProtectionZone: return "protection_zone";
  }
  return "unknown";
}

std::string Violation::Describe() const {
  std::ostringstream out;
  out << ViolationKindName(kind) << " at sample " << sample;
  if (kind == ViolationKind::kProtectionZone) {
    out << ": tool inside zone '" << zone_id << "'";
  } else {
    out << ", joint " << joint << ": " << value << " beyond " << limit;
  }
  return out.str();
}

std::string ValidationReport::Summary() const {
  if (violations.empty()) return "ok";
  constexpr std::size_t kListed = 8;
  std::string out = std::to_string(violations.size()) + " violation(s): ";
  for (std::size_t i = 0; i < std::min(kListed, violations.size()); ++i) {
    if (i > 0) out += "; ";
    out += violations[i].Describe();
  }
  if (violations.size() > kListed) out += "; ...";
  return out;
}

ValidationReport ValidateTrajectory(const JointTrajectory& traj, const RobotModel& model,
                                    const std::vector<Obstacle>& zones,
                                    const ValidationLimits& limits) {
  ValidationReport report;
  const std::size_t n = traj.size();
  if (traj.q.size() != n || traj.qdot.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "trajectory arrays differ in length");
  }
  const JointVector lower = model.LowerLimits();
  const JointVector upper = model.UpperLimits();
  const JointVector vmax = model.VelocityLimits();
  const std::vector<JointVector> accel = Differentiate(traj.times, traj.qdot);

  for (std::size_t k = 0; k < n; ++k) {
    const int sample = static_cast<int>(k);
    for (int i = 0; i < model.dof(); ++i) {
      const double q = traj.q[k][i];
      if (q < lower[i] - limits.tolerance || q > upper[i] + limits.tolerance) {
        report.violations.push_back({ViolationKind::kJointLimit, sample, i, "", q,
                                     q < lower[i] ? lower[i] : upper[i]});
      }
      const double v = std::abs(traj.qdot[k][i]);
      if (v > vmax[i] + limits.tolerance) {
        report.violations.push_back({ViolationKind::kVelocity, sample, i, "", v, vmax[i]});
      }
      const double a = std::abs(accel[k][i]);
      if (a > limits.acceleration + limits.tolerance) {
        report.violations.push_back(
            {ViolationKind::kAcceleration, sample, i, "", a, limits.acceleration});
      }
    }
    if (zones.empty()) continue;
    const Vec3 tool = ForwardKinematics(model, traj.q[k]).position;
    for (const Obstacle& zone : zones) {
      if (zone.Contains(tool)) {
        report.violations.push_back(
            {ViolationKind::kProtectionZone, sample, -1, zone.id, zone.Distance(tool), zone.margin});
      }
    }
  }
  return report;
}

std::string TrajectoryToJson(const JointTrajectory& traj) {
  json q = json::array();
  json qdot = json::array();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    q.push_back(std::vector<double>(traj.q[k].data(), traj.q[k].data() + traj.q[k].size()));
    qdot.push_back(
        std::vector<double>(traj.qdot[k].data(), traj.qdot[k].data() + traj.qdot[k].size()));
  }
  json doc = {{"schema", kTrajectorySchema},
              {"model", traj.model_name},
              {"times", traj.times},
              {"q", std::move(q)},
              {"qdot", std::move(qdot)}};
  return doc.dump(1) + "\n";
}

JointTrajectory TrajectoryFromJson(const std::string& text) {
  JointTrajectory traj;
  try {
    const json doc = json::parse(text);
    if (doc.at("schema").get<std::string>() != kTrajectorySchema) {
      throw Error(ErrorCode::kSchemaVersionUnsupported,
                  "trajectory schema " + doc.at("schema").dump());
    }
    traj.model_name = doc.at("model").get<std::string>();
    traj.times = doc.at("times").get<std::vector<double>>();
    for (const auto& row : doc.at("q")) {
      const auto v = row.get<std::vector<double>>();
      traj.q.push_back(Eigen::Map<const JointVector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    for (const auto& row : doc.at("qdot")) {
      const auto v = row.get<std::vector<double>>();
      traj.qdot.push_back(Eigen::Map<const JointVector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed trajectory: ") + e.what());
  }
  if (traj.q.size() != traj.times.size() || traj.qdot.size() != traj.times.size()) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory arrays differ in length");
  }
  return traj;
}

}  // namespace holoplan
