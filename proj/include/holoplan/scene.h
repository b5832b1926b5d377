#ifndef HOLOPLAN_SCENE_H_
#define HOLOPLAN_SCENE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "holoplan/geometry.h"
#include "holoplan/ik_solver.h"
#include "holoplan/rrt_star.h"
#include "holoplan/se3.h"
#include "holoplan/selection.h"
#include "holoplan/trajectory.h"

namespace holoplan {

inline constexpr const char* kSceneSchema = "holoplan-scene/1";

struct TrajectorySettings {
  double duration = kDefaultDuration;                        // s
  double joint_jump_threshold = kDefaultJointJumpThreshold;  // rad
  double acceleration_limit = kDefaultAccelerationLimit;     // rad/s^2
  double stream_rate = 10.0;                                 // Hz, execution frames
};

struct SelectionSettings {
  double threshold = kDefaultSelectionThreshold;  // m per cycle
  double cadence = kDefaultSelectionCadence;      // Hz
};

// Operator-authored world state. Poses, obstacles and protection zones are
// expressed in the world (console) frame; `bounds` is in the robot base frame.
struct Scene {
  std::string name;
  // H_0^w stored as the pose of the world frame in the base frame.
  Pose calibration;
  Pose start;
  Pose end;
  // Position via-points; orientation is interpolated from start to end.
  std::vector<Pose> middle;
  Aabb bounds;
  std::vector<Obstacle> obstacles;
  std::vector<Obstacle> protection_zones;
  PlannerSettings planner;
  IkConfig ik;
  TrajectorySettings trajectory;
  SelectionSettings selection;
  // Robot model file; relative paths resolve against the scene file's
  // directory, then the data directory. Empty means the shipped default.
  std::string model;

  Transform CalibrationTransform() const { return Transform::FromPose(calibration); }
  // Throws MalformedScene.
  void Validate() const;
};

// Canonical JSON text (sorted keys, fixed indentation): save(load(save(s)))
// equals save(s) byte for byte.
std::string SaveScene(const Scene& scene);
// Fields missing from the planner block take `planner_defaults`. Throws
// SchemaVersionUnsupported, MalformedScene.
Scene LoadScene(const std::string& text, const PlannerSettings& planner_defaults = {});
Scene LoadSceneFile(const std::filesystem::path& path,
                    const PlannerSettings& planner_defaults = {});

// Resolves the scene's model reference and loads it.
RobotModel LoadSceneModel(const Scene& scene, const std::filesystem::path& scene_dir = {});

// The planning problem in the robot base frame.
struct BaseFrameProblem {
  FrameId frame = FrameId::kRobotBase;
  Pose start;
  Pose end;
  std::vector<Pose> middle;
  Workspace workspace;
  std::vector<Obstacle> protection_zones;
};

// Maps every world-frame quantity of the scene through the calibration.
BaseFrameProblem ToBaseFrame(const Scene& scene);

}  // namespace holoplan

#endif  // HOLOPLAN_SCENE_H_
