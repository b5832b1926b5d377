#ifndef HOLOPLAN_SE3_H_
#define HOLOPLAN_SE3_H_

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include <Eigen/Core>

namespace holoplan {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Unit quaternion, scalar-first (w, x, y, z). q and -q are the same rotation.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion Identity() { return {}; }
  // `axis` need not be normalized; a zero axis yields the identity.
  static Quaternion FromAxisAngle(const Vec3& axis, double angle);
  static Quaternion FromRotationVector(const Vec3& rotvec);
  static Quaternion FromRotationMatrix(const Mat3& m);
  // Fixed-axis roll/pitch/yaw: R = Rz(yaw) * Ry(pitch) * Rx(roll).
  static Quaternion FromRpy(double roll, double pitch, double yaw);

  double Norm() const;
  double Dot(const Quaternion& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
  Quaternion Normalized() const;
  Quaternion Conjugate() const { return {w, -x, -y, -z}; }
  Quaternion operator*(const Quaternion& o) const;
  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  Vec3 Vec() const { return {x, y, z}; }

  Mat3 ToRotationMatrix() const;
  Vec3 Rotate(const Vec3& v) const;
  // Shortest-arc rotation vector (axis * angle, angle in [0, pi]).
  Vec3 ToRotationVector() const;
};

// Rotation angle in [0, pi] taking `a` to `b`, sign-insensitive.
double AngleBetween(const Quaternion& a, const Quaternion& b);

// True when a and b encode the same rotation (either sign) within `tol`.
bool SameRotation(const Quaternion& a, const Quaternion& b, double tol);

// Spherical linear interpolation along the shortest arc. Inputs must be unit
// norm within 1e-6 and t in [0, 1]; the result is unit norm.
Quaternion Slerp(const Quaternion& q1, const Quaternion& q2, double t);

struct Pose {
  Vec3 position = Vec3::Zero();
  Quaternion orientation;
};

// Rigid transform. Following the H_A^B naming, a transform stored for the
// pair (A, B) maps coordinates expressed in B into A.
class Transform {
 public:
  Transform() = default;
  // Throws InvalidRotation if `rotation` is not orthonormal with det +1.
  Transform(const Mat3& rotation, const Vec3& translation);

  static Transform Identity() { return {}; }
  static Transform FromTranslation(const Vec3& t);
  static Transform FromPose(const Pose& p);
  static Transform FromXyzRpy(const Vec3& xyz, const Vec3& rpy);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Transform Inverse() const;
  Vec3 Apply(const Vec3& point) const { return rotation_ * point + translation_; }
  Pose Apply(const Pose& pose) const;
  Pose ToPose() const;
  Eigen::Matrix4d Matrix() const;

  bool IsApprox(const Transform& o, double tol) const;

 private:
  Mat3 rotation_ = Mat3::Identity();
  Vec3 translation_ = Vec3::Zero();
};

// Homogeneous composition a * b.
Transform Compose(const Transform& a, const Transform& b);
Transform Inverse(const Transform& t);

enum class FrameId { kWorld, kRobotBase, kHologram, kTool };

std::string_view FrameName(FrameId id);

// Registered rigid transforms between named frames. Lookups route through any
// chain of registered edges in either direction.
class FrameRegistry {
 public:
  // Registers H_target^source, mapping `source` coordinates into `target`.
  void Register(FrameId target, FrameId source, const Transform& t);

  // Registry with every frame related to World by the identity.
  static FrameRegistry Identity();

  // H_to^from; throws UnregisteredFrame if no chain exists.
  Transform Lookup(FrameId to, FrameId from) const;

 private:
  std::map<std::pair<FrameId, FrameId>, Transform> edges_;
};

Pose MapPose(const Pose& p, FrameId from, FrameId to, const FrameRegistry& registry);

// Least-squares rigid fit (no scale) returning H_base^world such that
// base ~= H * world for each correspondence. Requires >= 3 non-collinear pairs.
Transform AlignFrames(std::span<const Vec3> points_world, std::span<const Vec3> points_base);

}  // namespace holoplan

#endif  // HOLOPLAN_SE3_H_
