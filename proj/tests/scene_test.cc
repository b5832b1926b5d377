#include "holoplan/scene.h"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "holoplan/error.h"
#include "support.h"

namespace holoplan {
namespace {

std::filesystem::path GoldenScenePath() { return testing::SourceDir() / "scenes" / "pick_and_place.json"; }

std::string ReadText(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode LoadError(const std::string& text) {
  try {
    LoadScene(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "scene loaded";
  return ErrorCode::kInvalidArgument;
}

TEST(SceneTest, SaveLoadSaveIsByteStable) {
  const Scene scene = LoadSceneFile(GoldenScenePath());
  const std::string once = SaveScene(scene);
  const std::string twice = SaveScene(LoadScene(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(nlohmann::json::parse(once).at("schema"), kSceneSchema);
}

TEST(SceneTest, LoadedFieldsMatchFile) {
  const Scene scene = LoadSceneFile(GoldenScenePath());
  EXPECT_EQ(scene.name, "pick_and_place");
  ASSERT_EQ(scene.obstacles.size(), 1u);
  EXPECT_EQ(scene.obstacles[0].id, "camera");
  ASSERT_EQ(scene.protection_zones.size(), 1u);
  EXPECT_EQ(scene.planner.candidates, 4);
  EXPECT_EQ(scene.ik.tolerance, 1e-6);
}

TEST(SceneTest, UnsupportedSchemaVersion) {
  auto doc = nlohmann::json::parse(ReadText(GoldenScenePath()));
  doc["schema"] = "holoplan-scene/99";
  EXPECT_EQ(LoadError(doc.dump()), ErrorCode::kSchemaVersionUnsupported);
}

TEST(SceneTest, MalformedInputs) {
  const auto golden = nlohmann::json::parse(ReadText(GoldenScenePath()));
  auto negative = golden;
  negative["obstacles"][0] = {{"id", "ball"}, {"type", "sphere"}, {"center", {0, 0, 0}}, {"radius", -0.1}};
  EXPECT_EQ(LoadError(negative.dump()), ErrorCode::kMalformedScene);
  auto no_start = golden;
  no_start.erase("start");
  EXPECT_EQ(LoadError(no_start.dump()), ErrorCode::kMalformedScene);
  auto bad_quat = golden;
  bad_quat["end"]["orientation"] = {1, 1, 0, 0};
  EXPECT_EQ(LoadError(bad_quat.dump()), ErrorCode::kMalformedScene);
  EXPECT_EQ(LoadError("{not json"), ErrorCode::kMalformedScene);
}

TEST(SceneTest, PlannerDefaultsFillMissingFields) {
  auto doc = nlohmann::json::parse(ReadText(GoldenScenePath()));
  doc.erase("planner");
  PlannerSettings defaults;
  defaults.max_iterations = 1234;
  EXPECT_EQ(LoadScene(doc.dump(), defaults).planner.max_iterations, 1234);
}

TEST(SceneTest, BaseFrameMappingOfGoldenScene) {
  const BaseFrameProblem p = ToBaseFrame(LoadSceneFile(GoldenScenePath()));
  EXPECT_EQ(p.frame, FrameId::kRobotBase);
  EXPECT_LT((p.start.position - Vec3(0.45, -0.25, 0.15)).norm(), 1e-9);
  EXPECT_LT((p.end.position - Vec3(0.45, 0.25, 0.15)).norm(), 1e-9);
  EXPECT_TRUE(SameRotation(p.start.orientation, Quaternion::FromAxisAngle(Vec3::UnitX(), M_PI), 1e-9));
  const Box& camera = std::get<Box>(p.workspace.obstacles.at(0).shape);
  EXPECT_LT((camera.center - Vec3(0.45, 0, 0.175)).norm(), 1e-9);
  const Sphere& zone = std::get<Sphere>(p.protection_zones.at(0).shape);
  EXPECT_LT((zone.center - Vec3(0, 0, 0.05)).norm(), 1e-9);
  // The hand-computed world coordinates of the base-frame start.
  const Transform h = LoadSceneFile(GoldenScenePath()).CalibrationTransform();
  EXPECT_LT((h.Apply({-0.05, -0.15, -0.65}) - Vec3(0.45, -0.25, 0.15)).norm(), 1e-9);
}

TEST(SceneTest, ModelResolvesRelativeToSceneDirectory) {
  const Scene scene = LoadSceneFile(GoldenScenePath());
  const RobotModel model = LoadSceneModel(scene, GoldenScenePath().parent_path());
  EXPECT_EQ(model.dof(), 7);
  EXPECT_EQ(LoadSceneModel(scene).dof(), 7) << "falls back to the data directory";
  Scene missing = scene;
  missing.model = "nope/absent.json";
  EXPECT_THROW(LoadSceneModel(missing, GoldenScenePath().parent_path()), Error);
}

}  // namespace
}  // namespace holoplan
