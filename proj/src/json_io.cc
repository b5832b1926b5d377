#include "holoplan/json_io.h"

#include <cmath>

#include "holoplan/error.h"

namespace holoplan::json_io {

namespace {

std::vector<double> Numbers(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " entries must be finite numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json ToJson(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 Vec3FromJson(const json& j) {
  const auto v = Numbers(j, 3, "vector");
  return {v[0], v[1], v[2]};
}

json ToJson(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

Quaternion QuaternionFromJson(const json& j) {
  const auto v = Numbers(j, 4, "quaternion");
  const Quaternion q{v[0], v[1], v[2], v[3]};
  if (std::abs(q.Norm() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidRotation, "quaternion is not unit-norm");
  }
  return q;
}

json ToJson(const Pose& p) {
  return {{"position", ToJson(p.position)}, {"orientation", ToJson(p.orientation)}};
}

Pose PoseFromJson(const json& j) {
  return {Vec3FromJson(j.at("position")), QuaternionFromJson(j.at("orientation"))};
}

json ToJson(const Transform& t) {
  return {{"rotation", ToJson(Quaternion::FromRotationMatrix(t.rotation()))},
          {"translation", ToJson(t.translation())}};
}

Transform TransformFromJson(const json& j) {
  const Quaternion q = QuaternionFromJson(j.at("rotation"));
  return Transform(q.Normalized().ToRotationMatrix(), Vec3FromJson(j.at("translation")));
}

json ToJson(const Obstacle& o) {
  json out = {{"id", o.id}, {"margin", o.margin}};
  if (const auto* s = std::get_if<Sphere>(&o.shape)) {
    out["type"] = "sphere";
    out["center"] = ToJson(s->center);
    out["radius"] = s->radius;
  } else {
    const Box& b = std::get<Box>(o.shape);
    out["type"] = "box";
    out["center"] = ToJson(b.center);
    out["half_extents"] = ToJson(b.half_extents);
    out["orientation"] = ToJson(b.orientation);
  }
  return out;
}

Obstacle ObstacleFromJson(const json& j) {
  Obstacle o;
  o.id = j.at("id").get<std::string>();
  Read(j, "margin", o.margin);
  const std::string type = j.at("type").get<std::string>();
  if (type == "sphere") {
    o.shape = Sphere{Vec3FromJson(j.at("center")), j.at("radius").get<double>()};
  } else if (type == "box") {
    Box b;
    b.center = Vec3FromJson(j.at("center"));
    b.half_extents = Vec3FromJson(j.at("half_extents"));
    if (j.contains("orientation")) b.orientation = QuaternionFromJson(j.at("orientation"));
    o.shape = b;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown obstacle type '" + type + "'");
  }
  o.Validate();
  return o;
}

json ToJson(const Aabb& b) { return {{"min", ToJson(b.min)}, {"max", ToJson(b.max)}}; }

Aabb AabbFromJson(const json& j) { return {Vec3FromJson(j.at("min")), Vec3FromJson(j.at("max"))}; }

json ToJson(const PlannerSettings& s) {
  return {{"max_iterations", s.max_iterations},
          {"step", s.step},
          {"goal_bias", s.goal_bias},
          {"goal_radius", s.goal_radius},
          {"neighbor_gamma", s.neighbor_gamma},
          {"neighbor_radius_max", s.neighbor_radius_max},
          {"clearance", s.clearance},
          {"collision_resolution", s.collision_resolution},
          {"inflation", s.inflation},
          {"candidates", s.candidates},
          {"base_seed", s.base_seed},
          {"resample_vertices", s.resample_vertices},
          {"timed_samples", s.timed_samples}};
}

void UpdateFromJson(const json& j, PlannerSettings& out) {
  Read(j, "max_iterations", out.max_iterations);
  Read(j, "step", out.step);
  Read(j, "goal_bias", out.goal_bias);
  Read(j, "goal_radius", out.goal_radius);
  Read(j, "neighbor_gamma", out.neighbor_gamma);
  Read(j, "neighbor_radius_max", out.neighbor_radius_max);
  Read(j, "clearance", out.clearance);
  Read(j, "collision_resolution", out.collision_resolution);
  Read(j, "inflation", out.inflation);
  Read(j, "candidates", out.candidates);
  Read(j, "base_seed", out.base_seed);
  Read(j, "resample_vertices", out.resample_vertices);
  Read(j, "timed_samples", out.timed_samples);
}

json ToJson(const IkConfig& c) {
  return {{"tolerance", c.tolerance},
          {"gradient_tolerance", c.gradient_tolerance},
          {"max_iterations", c.max_iterations},
          {"stagnation_window", c.stagnation_window},
          {"max_restarts", c.max_restarts},
          {"unreachable_threshold", c.unreachable_threshold},
          {"restart_seed", c.restart_seed}};
}

void UpdateFromJson(const json& j, IkConfig& out) {
  Read(j, "tolerance", out.tolerance);
  Read(j, "gradient_tolerance", out.gradient_tolerance);
  Read(j, "max_iterations", out.max_iterations);
  Read(j, "stagnation_window", out.stagnation_window);
  Read(j, "max_restarts", out.max_restarts);
  Read(j, "unreachable_threshold", out.unreachable_threshold);
  Read(j, "restart_seed", out.restart_seed);
}

json ToJson(const CandidatePath& p) {
  json markers = json::array();
  for (const auto& w : p.waypoints) markers.push_back(ToJson(w));
  return {{"id", p.id},
          {"cost", p.cost},
          {"seed", p.seed},
          {"status", PathStatusName(p.status)},
          {"markers", std::move(markers)}};
}

json ToJson(const SelectionEvent& e) {
  return {{"selected", e.selected_id},
          {"delta", e.delta},
          {"discarded", e.discarded},
          {"cycle", e.cycle}};
}

MarkerUpdate MarkerUpdateFromJson(const json& j) {
  MarkerUpdate u;
  u.path_id = j.at("path_id").get<int>();
  u.marker_index = j.at("marker").get<int>();
  u.position = Vec3FromJson(j.at("position"));
  u.sequence = j.at("seq").get<std::uint64_t>();
  return u;
}

json ToJson(const ValidationReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    json entry = {{"kind", ViolationKindName(v.kind)},
                  {"sample", v.sample},
                  {"value", v.value},
                  {"limit", v.limit}};
    if (v.kind == ViolationKind::kProtectionZone) {
      entry["zone"] = v.zone_id;
    } else {
      entry["joint"] = v.joint;
    }
    violations.push_back(std::move(entry));
  }
  return {{"ok", r.ok()}, {"violations", std::move(violations)}};
}

json ToJson(const ReachabilityNotice& n) {
  const char* level = n.level == Reachability::kReachable     ? "reachable"
                      : n.level == Reachability::kUnreachable ? "unreachable"
                                                              : "uncertain";
  return {{"level", level}, {"message", n.message}};
}

}  // namespace holoplan::json_io
