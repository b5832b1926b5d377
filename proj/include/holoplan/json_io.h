#ifndef HOLOPLAN_JSON_IO_H_
#define HOLOPLAN_JSON_IO_H_

#include <json.hpp>

#include "holoplan/geometry.h"
#include "holoplan/ik_solver.h"
#include "holoplan/rrt_star.h"
#include "holoplan/se3.h"
#include "holoplan/selection.h"
#include "holoplan/trajectory.h"

// JSON encodings shared by scene files and wire messages. Vectors are arrays
// [x, y, z]; quaternions are scalar-first arrays [w, x, y, z].
namespace holoplan::json_io {

using nlohmann::json;

json ToJson(const Vec3& v);
Vec3 Vec3FromJson(const json& j);

json ToJson(const Quaternion& q);
// Rejects non-unit quaternions (InvalidRotation).
Quaternion QuaternionFromJson(const json& j);

json ToJson(const Pose& p);
Pose PoseFromJson(const json& j);

// {"rotation": [w, x, y, z], "translation": [x, y, z]}
json ToJson(const Transform& t);
Transform TransformFromJson(const json& j);

json ToJson(const Obstacle& o);
Obstacle ObstacleFromJson(const json& j);

json ToJson(const Aabb& b);
Aabb AabbFromJson(const json& j);

// Missing fields keep the values already in `out`.
json ToJson(const PlannerSettings& s);
void UpdateFromJson(const json& j, PlannerSettings& out);
json ToJson(const IkConfig& c);
void UpdateFromJson(const json& j, IkConfig& out);

json ToJson(const CandidatePath& p);
json ToJson(const SelectionEvent& e);
MarkerUpdate MarkerUpdateFromJson(const json& j);
json ToJson(const ValidationReport& r);
json ToJson(const ReachabilityNotice& n);

}  // namespace holoplan::json_io

#endif  // HOLOPLAN_JSON_IO_H_
