#ifndef HOLOPLAN_GEOMETRY_H_
#define HOLOPLAN_GEOMETRY_H_

#include <string>
#include <variant>
#include <vector>

#include "holoplan/se3.h"

namespace holoplan {

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

struct Box {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Zero();
  Quaternion orientation;
};

// Closed region; boundary contact counts as inside. `margin` inflates the
// shape by a Minkowski sum with a ball.
struct Obstacle {
  std::string id;
  std::variant<Sphere, Box> shape;
  double margin = 0.0;

  // Throws InvalidArgument on non-positive size or negative margin.
  void Validate() const;
  // Distance from `p` to the un-inflated shape (0 inside).
  double Distance(const Vec3& p) const;
  bool Contains(const Vec3& p, double extra_inflation = 0.0) const;
  // The same obstacle expressed through a rigid transform.
  Obstacle Transformed(const Transform& t) const;
};

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool Contains(const Vec3& p) const;
  double Volume() const;
};

// Planning domain: C_free = bounds minus obstacles inflated by their margin
// plus `inflation` (the gripper radius).
struct Workspace {
  Aabb bounds;
  std::vector<Obstacle> obstacles;
  double inflation = 0.05;             // m
  double collision_resolution = 0.01;  // m, sample spacing along segments

  void Validate() const;
  bool PointFree(const Vec3& p) const;
  // True iff every sample spaced at most `collision_resolution` along [a, b]
  // (endpoints included) is in C_free.
  bool SegmentFree(const Vec3& a, const Vec3& b) const;
  // Same test against obstacles inflated by an extra `clearance`.
  bool SegmentFree(const Vec3& a, const Vec3& b, double clearance) const;
  bool PointFree(const Vec3& p, double clearance) const;
};

}  // namespace holoplan

#endif  // HOLOPLAN_GEOMETRY_H_
