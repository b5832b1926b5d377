#include "holoplan/scenario.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support.h"

namespace holoplan {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("holoplan_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun Cli(const std::string& args) {
    const fs::path log = dir_ / "stdout.txt";
    const std::string cmd = std::string(HOLOPLAN_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, Read(log)};
  }

  static std::string Read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static std::string Src(const std::string& rel) { return (testing::SourceDir() / rel).string(); }

  fs::path dir_;
};

TEST_F(CliTest, GoldenScenarioIsByteReproducible) {
  const CliRun a = Cli("run --script " + Src("scenarios/pick_and_place.json") + " --out " + (dir_ / "a").string());
  ASSERT_EQ(a.code, 0) << a.out;
  const CliRun b = Cli("run --script " + Src("scenarios/pick_and_place.json") + " --out " + (dir_ / "b").string());
  ASSERT_EQ(b.code, 0) << b.out;
  for (const char* f : {"candidates.json", "selected_path.json", "trajectory.json", "execution_log.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  }
  EXPECT_EQ(Read(dir_ / "a" / "trajectory.json"), Read(dir_ / "b" / "trajectory.json"));
  const auto candidates = nlohmann::json::parse(Read(dir_ / "a" / "candidates.json"));
  EXPECT_EQ(candidates.at("paths").size(), 4u);
  EXPECT_EQ(candidates.at("frame"), "world");
}

TEST_F(CliTest, PlanWritesCandidates) {
  const CliRun r = Cli("plan --scene " + Src("scenes/pick_and_place.json") + " -k 2 --seed 5 --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto candidates = nlohmann::json::parse(Read(dir_ / "candidates.json"));
  ASSERT_EQ(candidates.at("paths").size(), 2u);
  EXPECT_EQ(candidates.at("paths")[1].at("seed"), 6);
}

TEST_F(CliTest, GoalInsideObstacleExitsWithPlanningFailure) {
  const CliRun r = Cli("run --script " + Src("scenarios/goal_in_obstacle.json") + " --out " + dir_.string());
  EXPECT_EQ(r.code, kExitPlanningFailed) << r.out;
  EXPECT_NE(r.out.find("GoalInCollision"), std::string::npos);
}

TEST_F(CliTest, ScriptedDragSelectsPathTwo) {
  const CliRun r = Cli("run --script " + Src("scenarios/drag_select.json") + " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(Read(dir_ / "selected_path.json")).at("path_id"), 2);
  EXPECT_NE(r.out.find("cycle 2: path 2 selected"), std::string::npos);
}

TEST_F(CliTest, StatsCommand) {
  const CliRun r = Cli("stats --samples " + Src("data/reported_moments.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("25.5000"), std::string::npos);
  EXPECT_NE(r.out.find("5.0498"), std::string::npos);
  EXPECT_EQ(Cli("stats --samples " + Src("data/zeros.txt")).code, 0);
  EXPECT_EQ(Cli("stats --samples " + Src("data/single_row.txt")).code, kExitBadInput);
  EXPECT_EQ(Cli("stats --samples " + (dir_ / "missing.txt").string()).code, kExitBadInput);
}

TEST_F(CliTest, BadArgumentsExitFive) {
  EXPECT_EQ(Cli("").code, kExitBadInput);
  EXPECT_EQ(Cli("plan").code, kExitBadInput);
  EXPECT_EQ(Cli("plan --scene " + (dir_ / "none.json").string()).code, kExitBadInput);
}

TEST(ScenarioScriptTest, RejectsOutOfOrderActions) {
  const fs::path p = fs::temp_directory_path() / "holoplan_bad_script.json";
  std::ofstream(p) << R"({"scene": "x.json", "actions": [{"action": "confirm"}]})";
  EXPECT_THROW(LoadScenarioScript(p), Error);
  std::ofstream(p) << R"({"scene": "x.json", "actions": [{"action": "dance"}]})";
  EXPECT_THROW(LoadScenarioScript(p), Error);
  fs::remove(p);
}

TEST(ExitCodeTest, Mapping) {
  EXPECT_EQ(ExitCodeFor(ErrorCode::kAllRunsFailed), kExitPlanningFailed);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kJointJump), kExitUnreachableWaypoint);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kWaypointUnreachable), kExitUnreachableWaypoint);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kValidationFailed), kExitValidationFailed);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kMalformedScene), kExitBadInput);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kInvalidState), kExitFailure);
}

}  // namespace
}  // namespace holoplan
