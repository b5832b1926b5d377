#include "holoplan/robot_model.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <Eigen/Geometry>
#include <json.hpp>

#include "holoplan/error.h"
#include "holoplan/random.h"

namespace holoplan {

namespace {

using nlohmann::json;

constexpr const char* kModelSchema = "holoplan-robot/1";

Vec3 ReadVec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kInvalidModel, std::string(what) + " must be a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Transform ReadOrigin(const json& j) {
  const Vec3 xyz = j.contains("xyz") ? ReadVec3(j["xyz"], "xyz") : Vec3::Zero();
  const Vec3 rpy = j.contains("rpy") ? ReadVec3(j["rpy"], "rpy") : Vec3::Zero();
  return Transform::FromXyzRpy(xyz, rpy);
}

void CheckDof(const RobotModel& model, const JointVector& q) {
  if (q.size() != model.dof()) {
    throw Error(ErrorCode::kDimensionMismatch, "joint vector has " + std::to_string(q.size()) +
                                                   " entries, model has " +
                                                   std::to_string(model.dof()));
  }
}

}  // namespace

RobotModel::RobotModel(std::string name, std::vector<JointDescriptor> joints,
                       Transform tool_offset, JointVector home)
    : name_(std::move(name)), joints_(std::move(joints)), tool_offset_(tool_offset) {
  if (joints_.empty()) throw Error(ErrorCode::kInvalidModel, "model has no joints");
  for (auto& joint : joints_) {
    const double n = joint.axis.norm();
    if (!(n > 1e-12)) {
      throw Error(ErrorCode::kInvalidModel, "joint '" + joint.name + "' has a zero axis");
    }
    joint.axis /= n;
    if (!(joint.lower <= joint.upper)) {
      throw Error(ErrorCode::kInvalidModel, "joint '" + joint.name + "' has lower > upper");
    }
    if (joint.continuous && joint.upper - joint.lower < 2.0 * M_PI) {
      throw Error(ErrorCode::kInvalidModel,
                  "continuous joint '" + joint.name + "' must span a full turn");
    }
    if (!(joint.velocity_limit > 0.0)) {
      throw Error(ErrorCode::kInvalidModel,
                  "joint '" + joint.name + "' has a non-positive velocity limit");
    }
  }
  if (home.size() == 0) {
    home_ = 0.5 * (LowerLimits() + UpperLimits());
  } else {
    if (home.size() != dof()) throw Error(ErrorCode::kInvalidModel, "home has wrong length");
    if (!WithinLimits(home)) throw Error(ErrorCode::kInvalidModel, "home is outside limits");
    home_ = std::move(home);
  }
}

RobotModel RobotModel::FromJson(const std::string& text, int expected_dof) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidModel, std::string("unparseable model: ") + e.what());
  }
  try {
    if (j.value("schema", std::string(kModelSchema)) != kModelSchema) {
      throw Error(ErrorCode::kInvalidModel, "unsupported model schema");
    }
    std::vector<JointDescriptor> joints;
    for (const auto& jj : j.at("joints")) {
      JointDescriptor d;
      d.name = jj.value("name", "joint_" + std::to_string(joints.size() + 1));
      d.axis = ReadVec3(jj.at("axis"), "axis");
      d.origin = jj.contains("origin") ? ReadOrigin(jj["origin"]) : Transform::Identity();
      const auto& limits = jj.at("limits");
      d.lower = limits.at("lower").get<double>();
      d.upper = limits.at("upper").get<double>();
      d.velocity_limit = limits.value("velocity", kDefaultJointVelocityLimit);
      d.continuous = jj.value("continuous", false);
      joints.push_back(std::move(d));
    }
    if (expected_dof > 0 && static_cast<int>(joints.size()) != expected_dof) {
      throw Error(ErrorCode::kInvalidModel, "expected " + std::to_string(expected_dof) +
                                                " joints, found " +
                                                std::to_string(joints.size()));
    }
    const Transform tool =
        j.contains("tool_offset") ? ReadOrigin(j["tool_offset"]) : Transform::Identity();
    JointVector home;
    if (j.contains("home")) {
      const auto h = j["home"].get<std::vector<double>>();
      home = Eigen::Map<const JointVector>(h.data(), static_cast<Eigen::Index>(h.size()));
    }
    return RobotModel(j.at("name").get<std::string>(), std::move(joints), tool, home);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidModel, std::string("malformed model: ") + e.what());
  }
}

RobotModel RobotModel::Load(const std::filesystem::path& path, int expected_dof) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str(), expected_dof);
}

RobotModel RobotModel::LoadDefault() {
  std::filesystem::path dir = HOLOPLAN_DATA_DIR;
  if (const char* env = std::getenv("HOLOPLAN_DATA_DIR")) dir = env;
  return Load(dir / "models" / "gen3.json");
}

JointVector RobotModel::LowerLimits() const {
  JointVector v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints_[i].lower;
  return v;
}

JointVector RobotModel::UpperLimits() const {
  JointVector v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints_[i].upper;
  return v;
}

JointVector RobotModel::VelocityLimits() const {
  JointVector v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints_[i].velocity_limit;
  return v;
}

bool RobotModel::WithinLimits(const JointVector& q, double tol) const {
  if (q.size() != dof()) return false;
  for (int i = 0; i < dof(); ++i) {
    if (q[i] < joints_[i].lower - tol || q[i] > joints_[i].upper + tol) return false;
  }
  return true;
}

JointVector RobotModel::Clamp(const JointVector& q) const {
  CheckDof(*this, q);
  JointVector out = q;
  for (int i = 0; i < dof(); ++i) out[i] = std::clamp(q[i], joints_[i].lower, joints_[i].upper);
  return out;
}

JointVector RobotModel::Project(const JointVector& q) const {
  CheckDof(*this, q);
  JointVector out = q;
  for (int i = 0; i < dof(); ++i) {
    const auto& j = joints_[i];
    if (j.continuous) {
      constexpr double kTurn = 2.0 * M_PI;
      if (out[i] > j.upper) out[i] -= kTurn * std::ceil((out[i] - j.upper) / kTurn);
      if (out[i] < j.lower) out[i] += kTurn * std::ceil((j.lower - out[i]) / kTurn);
    }
    out[i] = std::clamp(out[i], j.lower, j.upper);
  }
  return out;
}

double RobotModel::ReachBound() const {
  double reach = tool_offset_.translation().norm();
  for (const auto& joint : joints_) reach += joint.origin.translation().norm();
  return reach;
}

Transform ForwardKinematicsTransform(const RobotModel& model, const JointVector& q) {
  CheckDof(model, q);
  Mat3 r = Mat3::Identity();
  Vec3 p = Vec3::Zero();
  const auto& joints = model.joints();
  for (int i = 0; i < model.dof(); ++i) {
    const Transform& o = joints[i].origin;
    p = r * o.translation() + p;
    r = r * o.rotation();
    r = r * Eigen::AngleAxisd(q[i], joints[i].axis).toRotationMatrix();
  }
  const Transform& tool = model.tool_offset();
  p = r * tool.translation() + p;
  r = r * tool.rotation();
  return Transform(r, p);
}

Pose ForwardKinematics(const RobotModel& model, const JointVector& q) {
  return ForwardKinematicsTransform(model, q).ToPose();
}

Jacobian ComputeJacobian(const RobotModel& model, const JointVector& q) {
  CheckDof(model, q);
  const int n = model.dof();
  std::vector<Vec3> origins(n);
  std::vector<Vec3> axes(n);
  Mat3 r = Mat3::Identity();
  Vec3 p = Vec3::Zero();
  const auto& joints = model.joints();
  for (int i = 0; i < n; ++i) {
    const Transform& o = joints[i].origin;
    p = r * o.translation() + p;
    r = r * o.rotation();
    origins[i] = p;
    axes[i] = r * joints[i].axis;
    r = r * Eigen::AngleAxisd(q[i], joints[i].axis).toRotationMatrix();
  }
  const Vec3 tool = r * model.tool_offset().translation() + p;

  Jacobian jac(6, n);
  for (int i = 0; i < n; ++i) {
    jac.block<3, 1>(0, i) = axes[i].cross(tool - origins[i]);
    jac.block<3, 1>(3, i) = axes[i];
  }
  return jac;
}

JointVector SampleConfiguration(const RobotModel& model, std::uint64_t seed) {
  RandomStream rng(seed);
  JointVector q(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    q[i] = rng.Uniform(model.joints()[i].lower, model.joints()[i].upper);
  }
  return q;
}

}  // namespace holoplan
