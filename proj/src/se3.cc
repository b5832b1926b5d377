#include "holoplan/se3.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "holoplan/error.h"

namespace holoplan {

namespace {
constexpr double kUnitTolerance = 1e-6;
constexpr double kSlerpSinThreshold = 1e-8;

void CheckUnit(const Quaternion& q, const char* what) {
  if (std::abs(q.Norm() - 1.0) > kUnitTolerance) {
    throw Error(ErrorCode::kInvalidRotation,
                std::string(what) + " is not unit norm (|q| = " + std::to_string(q.Norm()) + ")");
  }
}
}  // namespace

Quaternion Quaternion::FromAxisAngle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return Identity();
  const Vec3 u = axis / n;
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), u.x() * s, u.y() * s, u.z() * s};
}

Quaternion Quaternion::FromRotationVector(const Vec3& rotvec) {
  return FromAxisAngle(rotvec, rotvec.norm());
}

Quaternion Quaternion::FromRotationMatrix(const Mat3& m) {
  const Eigen::Quaterniond e(m);
  return Quaternion{e.w(), e.x(), e.y(), e.z()}.Normalized();
}

Quaternion Quaternion::FromRpy(double roll, double pitch, double yaw) {
  const Quaternion qx = FromAxisAngle(Vec3::UnitX(), roll);
  const Quaternion qy = FromAxisAngle(Vec3::UnitY(), pitch);
  const Quaternion qz = FromAxisAngle(Vec3::UnitZ(), yaw);
  return (qz * qy * qx).Normalized();
}

double Quaternion::Norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::Normalized() const {
  const double n = Norm();
  if (n == 0.0) throw Error(ErrorCode::kInvalidRotation, "zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quaternion Quaternion::operator*(const Quaternion& o) const {
  return {w * o.w - x * o.x - y * o.y - z * o.z,
          w * o.x + x * o.w + y * o.z - z * o.y,
          w * o.y - x * o.z + y * o.w + z * o.x,
          w * o.z + x * o.y - y * o.x + z * o.w};
}

Mat3 Quaternion::ToRotationMatrix() const {
  return Eigen::Quaterniond(w, x, y, z).normalized().toRotationMatrix();
}

Vec3 Quaternion::Rotate(const Vec3& v) const { return ToRotationMatrix() * v; }

Vec3 Quaternion::ToRotationVector() const {
  Quaternion q = *this;
  if (q.w < 0.0) q = -q;
  const Vec3 v = q.Vec();
  const double s = v.norm();
  if (s < 1e-12) {
    // Small-angle limit of angle * axis = 2 * atan2(s, w) * v / s.
    return 2.0 * v / q.w;
  }
  const double angle = 2.0 * std::atan2(s, q.w);
  return v * (angle / s);
}

double AngleBetween(const Quaternion& a, const Quaternion& b) {
  const Quaternion rel = a.Conjugate() * b;
  return 2.0 * std::atan2(rel.Vec().norm(), std::abs(rel.w));
}

bool SameRotation(const Quaternion& a, const Quaternion& b, double tol) {
  const double plus = std::max({std::abs(a.w - b.w), std::abs(a.x - b.x),
                                std::abs(a.y - b.y), std::abs(a.z - b.z)});
  const double minus = std::max({std::abs(a.w + b.w), std::abs(a.x + b.x),
                                 std::abs(a.y + b.y), std::abs(a.z + b.z)});
  return std::min(plus, minus) <= tol;
}

Quaternion Slerp(const Quaternion& q1, const Quaternion& q2_in, double t) {
  CheckUnit(q1, "q1");
  CheckUnit(q2_in, "q2");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "slerp parameter outside [0, 1]");
  }
  Quaternion q2 = q2_in;
  double cos_omega = q1.Dot(q2);
  if (cos_omega < 0.0) {
    q2 = -q2;
    cos_omega = -cos_omega;
  }
  cos_omega = std::min(cos_omega, 1.0);
  const double omega = std::acos(cos_omega);
  const double sin_omega = std::sin(omega);

  double a;
  double b;
  if (sin_omega < kSlerpSinThreshold) {
    a = 1.0 - t;
    b = t;
  } else {
    a = std::sin((1.0 - t) * omega) / sin_omega;
    b = std::sin(t * omega) / sin_omega;
  }
  const Quaternion r{a * q1.w + b * q2.w, a * q1.x + b * q2.x, a * q1.y + b * q2.y,
                     a * q1.z + b * q2.z};
  return r.Normalized();
}

Transform::Transform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  const double ortho = (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-6 || std::abs(rotation.determinant() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidRotation, "transform rotation is not a proper rotation");
  }
}

Transform Transform::FromTranslation(const Vec3& t) { return Transform(Mat3::Identity(), t); }

Transform Transform::FromPose(const Pose& p) {
  return Transform(p.orientation.ToRotationMatrix(), p.position);
}

Transform Transform::FromXyzRpy(const Vec3& xyz, const Vec3& rpy) {
  return Transform(Quaternion::FromRpy(rpy.x(), rpy.y(), rpy.z()).ToRotationMatrix(), xyz);
}

Transform Transform::Inverse() const {
  Transform inv;
  inv.rotation_ = rotation_.transpose();
  inv.translation_ = -(inv.rotation_ * translation_);
  return inv;
}

Pose Transform::Apply(const Pose& pose) const {
  Pose out;
  out.position = Apply(pose.position);
  out.orientation = (Quaternion::FromRotationMatrix(rotation_) * pose.orientation).Normalized();
  return out;
}

Pose Transform::ToPose() const {
  return Pose{translation_, Quaternion::FromRotationMatrix(rotation_)};
}

Eigen::Matrix4d Transform::Matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

bool Transform::IsApprox(const Transform& o, double tol) const {
  return (rotation_ - o.rotation_).cwiseAbs().maxCoeff() <= tol &&
         (translation_ - o.translation_).cwiseAbs().maxCoeff() <= tol;
}

Transform Compose(const Transform& a, const Transform& b) {
  return Transform(a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation());
}

Transform Inverse(const Transform& t) { return t.Inverse(); }

std::string_view FrameName(FrameId id) {
  switch (id) {
    case FrameId::kWorld: return "world";
    case FrameId::kRobotBase: return "robot_base";
    case FrameId::kHologram: return "hologram";
    case FrameId::kTool: return "tool";
  }
  return "unknown";
}

void FrameRegistry::Register(FrameId target, FrameId source, const Transform& t) {
  edges_[{target, source}] = t;
  edges_[{source, target}] = t.Inverse();
}

FrameRegistry FrameRegistry::Identity() {
  FrameRegistry r;
  r.Register(FrameId::kWorld, FrameId::kRobotBase, Transform::Identity());
  r.Register(FrameId::kWorld, FrameId::kHologram, Transform::Identity());
  r.Register(FrameId::kWorld, FrameId::kTool, Transform::Identity());
  return r;
}

Transform FrameRegistry::Lookup(FrameId to, FrameId from) const {
  if (to == from) return Transform::Identity();
  // Breadth-first search over registered edges; accumulates H_node^from.
  std::deque<std::pair<FrameId, Transform>> queue{{from, Transform::Identity()}};
  std::set<FrameId> visited{from};
  while (!queue.empty()) {
    auto [node, to_node] = queue.front();
    queue.pop_front();
    for (const auto& [key, edge] : edges_) {
      if (key.second != node || visited.count(key.first)) continue;
      const Transform next = Compose(edge, to_node);
      if (key.first == to) return next;
      visited.insert(key.first);
      queue.emplace_back(key.first, next);
    }
  }
  throw Error(ErrorCode::kUnregisteredFrame, "no transform chain from " +
                                                 std::string(FrameName(from)) + " to " +
                                                 std::string(FrameName(to)));
}

Pose MapPose(const Pose& p, FrameId from, FrameId to, const FrameRegistry& registry) {
  return registry.Lookup(to, from).Apply(p);
}

Transform AlignFrames(std::span<const Vec3> points_world, std::span<const Vec3> points_base) {
  if (points_world.size() != points_base.size()) {
    throw Error(ErrorCode::kDegenerateCorrespondences, "correspondence lists differ in length");
  }
  const std::size_t n = points_world.size();
  if (n < 3) {
    throw Error(ErrorCode::kDegenerateCorrespondences, "need at least 3 correspondences");
  }
  Vec3 cw = Vec3::Zero();
  Vec3 cb = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    cw += points_world[i];
    cb += points_base[i];
  }
  cw /= static_cast<double>(n);
  cb /= static_cast<double>(n);

  Eigen::Matrix<double, 3, Eigen::Dynamic> pw(3, n);
  Eigen::Matrix<double, 3, Eigen::Dynamic> pb(3, n);
  for (std::size_t i = 0; i < n; ++i) {
    pw.col(i) = points_world[i] - cw;
    pb.col(i) = points_base[i] - cb;
  }

  // Collinearity shows up as a rank <= 1 centered point cloud.
  const Eigen::JacobiSVD<Eigen::MatrixXd> spread(pw);
  const auto sv = spread.singularValues();
  if (sv(0) == 0.0 || sv(1) <= 1e-9 * sv(0)) {
    throw Error(ErrorCode::kDegenerateCorrespondences, "correspondences are collinear");
  }

  const Mat3 cov = pb * pw.transpose();
  const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Mat3 r = svd.matrixU() * d * svd.matrixV().transpose();
  return Transform(r, cb - r * cw);
}

}  // namespace holoplan
