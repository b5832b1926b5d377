#ifndef HOLOPLAN_SCENARIO_H_
#define HOLOPLAN_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "holoplan/error.h"
#include "holoplan/se3.h"

namespace holoplan {

// Process exit codes of the headless driver.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitPlanningFailed = 2,
  kExitUnreachableWaypoint = 3,
  kExitValidationFailed = 4,
  kExitBadInput = 5,
};

int ExitCodeFor(ErrorCode code);

enum class SelectRule { kFirst, kLowestCost, kTrace };

struct ScenarioAction {
  enum class Kind { kPlan, kSelect, kConfirm, kExecute, kExport };
  Kind kind = Kind::kPlan;
  std::optional<int> candidates;       // plan
  std::optional<std::uint64_t> seed;   // plan
  SelectRule rule = SelectRule::kLowestCost;
  std::filesystem::path trace;         // select with the trace rule
};

struct ScenarioScript {
  std::filesystem::path scene;
  std::vector<ScenarioAction> actions;

  // Checks that the actions form a legal session sequence. Throws
  // InvalidArgument.
  void Validate() const;
};

// Relative paths inside the script resolve against the script's directory.
ScenarioScript LoadScenarioScript(const std::filesystem::path& path);

// A recorded operator drag: one entry per selection cycle. Each update names
// a path marker and either an absolute world position or an offset from the
// marker's current position.
struct TraceUpdate {
  int path_id = 0;
  int marker = 0;
  std::optional<Vec3> position;
  std::optional<Vec3> offset;
};

struct MarkerTrace {
  double cadence_hz = 60.0;
  std::vector<std::vector<TraceUpdate>> cycles;
};

MarkerTrace LoadMarkerTrace(const std::filesystem::path& path);

struct ScenarioResult {
  int exit_code = kExitOk;
  std::string message;
  std::optional<int> selected_id;
};

// Runs the script against an in-process service and writes candidates.json,
// selected_path.json, trajectory.json and execution_log.jsonl to `out_dir`.
ScenarioResult RunScenario(const ScenarioScript& script, const std::filesystem::path& out_dir,
                           std::ostream& log);

// Plans only and writes candidates.json.
ScenarioResult RunPlanCommand(const std::filesystem::path& scene, std::optional<int> candidates,
                              std::optional<std::uint64_t> seed,
                              const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace holoplan

#endif  // HOLOPLAN_SCENARIO_H_
