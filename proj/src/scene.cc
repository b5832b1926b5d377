#include "holoplan/scene.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "holoplan/error.h"
#include "holoplan/json_io.h"

namespace holoplan {

namespace {

using json_io::json;

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json ObstacleList(const std::vector<Obstacle>& obstacles) {
  json out = json::array();
  for (const auto& o : obstacles) out.push_back(json_io::ToJson(o));
  return out;
}

std::vector<Obstacle> ReadObstacles(const json& j, const char* key) {
  std::vector<Obstacle> out;
  if (!j.contains(key)) return out;
  for (const auto& o : j.at(key)) out.push_back(json_io::ObstacleFromJson(o));
  return out;
}

}  // namespace

void Scene::Validate() const {
  try {
    for (const Pose* p : {&calibration, &start, &end}) {
      if (!p->position.allFinite() || std::abs(p->orientation.Norm() - 1.0) > 1e-6) {
        throw Error(ErrorCode::kMalformedScene, "poses need finite positions and unit orientations");
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (!(bounds.min[i] < bounds.max[i])) {
        throw Error(ErrorCode::kMalformedScene, "workspace bounds need min < max on every axis");
      }
    }
    for (const auto& o : obstacles) o.Validate();
    for (const auto& z : protection_zones) z.Validate();
    planner.Validate();
    ik.Validate();
    if (!(trajectory.duration > 0.0) || !(trajectory.joint_jump_threshold > 0.0) ||
        !(trajectory.acceleration_limit > 0.0) || !(trajectory.stream_rate > 0.0)) {
      throw Error(ErrorCode::kMalformedScene, "trajectory settings must be positive");
    }
    if (!(selection.threshold > 0.0) || !(selection.cadence > 0.0)) {
      throw Error(ErrorCode::kMalformedScene, "selection settings must be positive");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedScene) throw;
    throw Error(ErrorCode::kMalformedScene, e.what());
  }
}

std::string SaveScene(const Scene& scene) {
  json middle = json::array();
  for (const auto& p : scene.middle) middle.push_back(json_io::ToJson(p));
  json doc = {
      {"schema", kSceneSchema},
      {"name", scene.name},
      {"model", scene.model},
      {"calibration", json_io::ToJson(scene.calibration)},
      {"start", json_io::ToJson(scene.start)},
      {"end", json_io::ToJson(scene.end)},
      {"middle", std::move(middle)},
      {"bounds", json_io::ToJson(scene.bounds)},
      {"obstacles", ObstacleList(scene.obstacles)},
      {"protection_zones", ObstacleList(scene.protection_zones)},
      {"planner", json_io::ToJson(scene.planner)},
      {"ik", json_io::ToJson(scene.ik)},
      {"trajectory",
       {{"duration", scene.trajectory.duration},
        {"joint_jump_threshold", scene.trajectory.joint_jump_threshold},
        {"acceleration_limit", scene.trajectory.acceleration_limit},
        {"stream_rate", scene.trajectory.stream_rate}}},
      {"selection",
       {{"threshold", scene.selection.threshold}, {"cadence", scene.selection.cadence}}},
  };
  return doc.dump(2) + "\n";
}

Scene LoadScene(const std::string& text, const PlannerSettings& planner_defaults) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedScene, std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema") || !doc.at("schema").is_string()) {
    throw Error(ErrorCode::kMalformedScene, "missing schema field");
  }
  if (doc.at("schema").get<std::string>() != kSceneSchema) {
    throw Error(ErrorCode::kSchemaVersionUnsupported,
                "scene schema '" + doc.at("schema").get<std::string>() + "' is not " + kSceneSchema);
  }

  Scene scene;
  scene.planner = planner_defaults;
  try {
    Read(doc, "name", scene.name);
    Read(doc, "model", scene.model);
    if (doc.contains("calibration")) scene.calibration = json_io::PoseFromJson(doc.at("calibration"));
    scene.start = json_io::PoseFromJson(doc.at("start"));
    scene.end = json_io::PoseFromJson(doc.at("end"));
    if (doc.contains("middle")) {
      for (const auto& p : doc.at("middle")) scene.middle.push_back(json_io::PoseFromJson(p));
    }
    scene.bounds = json_io::AabbFromJson(doc.at("bounds"));
    scene.obstacles = ReadObstacles(doc, "obstacles");
    scene.protection_zones = ReadObstacles(doc, "protection_zones");
    if (doc.contains("planner")) json_io::UpdateFromJson(doc.at("planner"), scene.planner);
    if (doc.contains("ik")) json_io::UpdateFromJson(doc.at("ik"), scene.ik);
    if (doc.contains("trajectory")) {
      const json& t = doc.at("trajectory");
      Read(t, "duration", scene.trajectory.duration);
      Read(t, "joint_jump_threshold", scene.trajectory.joint_jump_threshold);
      Read(t, "acceleration_limit", scene.trajectory.acceleration_limit);
      Read(t, "stream_rate", scene.trajectory.stream_rate);
    }
    if (doc.contains("selection")) {
      Read(doc.at("selection"), "threshold", scene.selection.threshold);
      Read(doc.at("selection"), "cadence", scene.selection.cadence);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedScene, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedScene) throw;
    throw Error(ErrorCode::kMalformedScene, e.what());
  }
  scene.Validate();
  return scene;
}

Scene LoadSceneFile(const std::filesystem::path& path, const PlannerSettings& planner_defaults) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return LoadScene(buffer.str(), planner_defaults);
}

RobotModel LoadSceneModel(const Scene& scene, const std::filesystem::path& scene_dir) {
  if (scene.model.empty()) return RobotModel::LoadDefault();
  const std::filesystem::path ref(scene.model);
  if (ref.is_absolute()) return RobotModel::Load(ref);
  if (!scene_dir.empty() && std::filesystem::exists(scene_dir / ref)) {
    return RobotModel::Load(scene_dir / ref);
  }
  const char* env = std::getenv("HOLOPLAN_DATA_DIR");
  const std::filesystem::path data_dir = env != nullptr ? env : HOLOPLAN_DATA_DIR;
  if (std::filesystem::exists(data_dir / ref)) return RobotModel::Load(data_dir / ref);
  return RobotModel::Load(data_dir / "models" / ref.filename());
}

BaseFrameProblem ToBaseFrame(const Scene& scene) {
  FrameRegistry registry;
  registry.Register(FrameId::kRobotBase, FrameId::kWorld, scene.CalibrationTransform());
  const Transform h = registry.Lookup(FrameId::kRobotBase, FrameId::kWorld);

  BaseFrameProblem problem;
  problem.start = MapPose(scene.start, FrameId::kWorld, FrameId::kRobotBase, registry);
  problem.end = MapPose(scene.end, FrameId::kWorld, FrameId::kRobotBase, registry);
  for (const auto& p : scene.middle) {
    problem.middle.push_back(MapPose(p, FrameId::kWorld, FrameId::kRobotBase, registry));
  }
  problem.workspace.bounds = scene.bounds;
  problem.workspace.inflation = scene.planner.inflation;
  problem.workspace.collision_resolution = scene.planner.collision_resolution;
  for (const auto& o : scene.obstacles) problem.workspace.obstacles.push_back(o.Transformed(h));
  for (const auto& z : scene.protection_zones) problem.protection_zones.push_back(z.Transformed(h));
  return problem;
}

}  // namespace holoplan
