#include "holoplan/geometry.h"

#include <cmath>

#include "holoplan/error.h"

namespace holoplan {

void Obstacle::Validate() const {
  if (!(margin >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "obstacle '" + id + "' has a negative margin");
  }
  if (const auto* s = std::get_if<Sphere>(&shape)) {
    if (!(s->radius > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "sphere '" + id + "' needs a positive radius");
    }
  } else {
    const auto& b = std::get<Box>(shape);
    if (!(b.half_extents.minCoeff() > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "box '" + id + "' needs positive half-extents");
    }
    if (std::abs(b.orientation.Norm() - 1.0) > 1e-6) {
      throw Error(ErrorCode::kInvalidRotation, "box '" + id + "' orientation is not unit");
    }
  }
}

double Obstacle::Distance(const Vec3& p) const {
  if (const auto* s = std::get_if<Sphere>(&shape)) {
    return std::max(0.0, (p - s->center).norm() - s->radius);
  }
  const auto& b = std::get<Box>(shape);
  const Vec3 local = b.orientation.Conjugate().Rotate(p - b.center);
  const Vec3 outside = (local.cwiseAbs() - b.half_extents).cwiseMax(0.0);
  return outside.norm();
}

bool Obstacle::Contains(const Vec3& p, double extra_inflation) const {
  const double r = margin + extra_inflation;
  if (const auto* s = std::get_if<Sphere>(&shape)) {
    const double reach = s->radius + r;
    return (p - s->center).squaredNorm() <= reach * reach;
  }
  return Distance(p) <= r;
}

Obstacle Obstacle::Transformed(const Transform& t) const {
  Obstacle out = *this;
  if (auto* s = std::get_if<Sphere>(&out.shape)) {
    s->center = t.Apply(s->center);
  } else {
    auto& b = std::get<Box>(out.shape);
    b.center = t.Apply(b.center);
    b.orientation = (Quaternion::FromRotationMatrix(t.rotation()) * b.orientation).Normalized();
  }
  return out;
}

bool Aabb::Contains(const Vec3& p) const {
  return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
}

double Aabb::Volume() const { return (max - min).prod(); }

void Workspace::Validate() const {
  if (!((bounds.max - bounds.min).minCoeff() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "workspace bounds must satisfy min < max per axis");
  }
  if (!(inflation >= 0.0) || !(collision_resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bad inflation or collision resolution");
  }
  for (const auto& o : obstacles) o.Validate();
}

bool Workspace::PointFree(const Vec3& p) const { return PointFree(p, 0.0); }

bool Workspace::PointFree(const Vec3& p, double clearance) const {
  if (!bounds.Contains(p)) return false;
  for (const auto& o : obstacles) {
    if (o.Contains(p, inflation + clearance)) return false;
  }
  return true;
}

bool Workspace::SegmentFree(const Vec3& a, const Vec3& b) const { return SegmentFree(a, b, 0.0); }

bool Workspace::SegmentFree(const Vec3& a, const Vec3& b, double clearance) const {
  const double length = (b - a).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(length / collision_resolution)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    if (!PointFree(a + t * (b - a), clearance)) return false;
  }
  return true;
}

}  // namespace holoplan
