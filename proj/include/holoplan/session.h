#ifndef HOLOPLAN_SESSION_H_
#define HOLOPLAN_SESSION_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holoplan/robot_model.h"
#include "holoplan/rrt_star.h"
#include "holoplan/scene.h"
#include "holoplan/selection.h"
#include "holoplan/trajectory.h"

namespace holoplan {

enum class SessionState { kIdle, kPlanning, kAwaitingSelection, kExecuting, kDone, kFault };

std::string_view SessionStateName(SessionState s);
bool IsLegalTransition(SessionState from, SessionState to);

// Append-only, sequence-numbered message log of one session. Readers may
// block for new entries.
class EventLog {
 public:
  // Stamps `event` with the next sequence number and returns it.
  std::uint64_t Append(nlohmann::json event);
  std::vector<nlohmann::json> Since(std::uint64_t after) const;
  // Waits up to `timeout` for an entry after `after`.
  std::vector<nlohmann::json> WaitSince(std::uint64_t after,
                                        std::chrono::milliseconds timeout) const;
  std::uint64_t last_seq() const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<nlohmann::json> events_;
};

struct ExecutionFrame {
  double t = 0.0;
  JointVector q;
  Pose tool_base;
  Pose tool_world;
};

// Everything a planning job needs, copied out of the session so the job can
// run on a worker without touching session state.
struct PlanJob {
  BaseFrameProblem problem;
  PlannerSettings settings;
  IkConfig ik;
  std::shared_ptr<const RobotModel> model;
  int candidates = 1;
  std::uint64_t base_seed = 1;
};

struct PlanOutcome {
  std::vector<CandidatePath> paths;
  std::vector<RunFailure> failures;
  ReachabilityNotice start_reachability;
  ReachabilityNotice end_reachability;
};

// Runs the K planner loops leg by leg through the via-points, resamples each
// candidate to M uniform markers and classifies endpoint reachability.
// Throws PlanningFailed carrying the per-run reasons when no run survives.
PlanOutcome RunPlanJob(const PlanJob& job);

// One operator session. All public methods are thread-safe; mutations happen
// under the session lock and publish events to the log.
class Session {
 public:
  explicit Session(std::string id);

  const std::string& id() const { return id_; }
  SessionState state() const;
  const EventLog& events() const { return events_; }

  // Allowed from Idle, AwaitingSelection, Done and Fault; returns to Idle and
  // publishes reachability notices for the start and end poses.
  void PutScene(const Scene& scene, const std::filesystem::path& scene_dir = {});
  std::optional<Scene> scene() const;

  // Idle or AwaitingSelection -> Planning. Throws InvalidState.
  PlanJob BeginPlanning(std::optional<int> candidates = std::nullopt,
                        std::optional<std::uint64_t> base_seed = std::nullopt);
  // Planning -> AwaitingSelection.
  void CompletePlanning(PlanOutcome outcome);
  // Planning -> Fault; publishes the reason.
  void FailPlanning(const std::string& reason);
  // BeginPlanning, RunPlanJob and CompletePlanning in the calling thread.
  PlanOutcome Plan(std::optional<int> candidates = std::nullopt,
                   std::optional<std::uint64_t> base_seed = std::nullopt);

  // Candidates with markers in the base frame.
  std::vector<CandidatePath> candidates() const;
  std::optional<int> selected_id() const;

  // Marker positions arrive in the world frame and are queued for the next
  // selection cycle.
  void EnqueueMarkers(const std::vector<MarkerUpdate>& world_updates);
  bool HasPendingMarkers() const;
  // Consumes the queue in sequence order. A rejected batch publishes a notice
  // and rethrows.
  std::optional<SelectionEvent> RunSelectionCycle();
  // Direct selection for the auto-select rules.
  SelectionEvent SelectPath(int path_id);

  // Re-checks the path, marks it Executed and builds the joint trajectory.
  // Trajectory failures move the session to Fault and rethrow.
  void Confirm(int path_id);
  std::optional<JointTrajectory> trajectory() const;

  // AwaitingSelection with a confirmed path -> Executing -> Done. Validates
  // first; violations move to Fault and throw ValidationFailed. `pace` is
  // called with each frame's time offset for real-time streaming.
  std::vector<ExecutionFrame> Execute(
      const std::function<void(double)>& pace = nullptr);

  // Throws InvalidState when no trajectory has been built.
  std::string ExportTrajectory() const;

  nlohmann::json Snapshot() const;

 private:
  void TransitionLocked(SessionState to);
  void PublishLocked(const std::string& type, nlohmann::json body);
  nlohmann::json CandidatesMessageLocked(const PlanOutcome* outcome) const;
  Vec3 ToWorldLocked(const Vec3& base) const;
  Vec3 ToBaseLocked(const Vec3& world) const;

  const std::string id_;
  mutable std::mutex mu_;
  EventLog events_;
  SessionState state_ = SessionState::kIdle;
  std::optional<Scene> scene_;
  std::filesystem::path scene_dir_;
  std::optional<BaseFrameProblem> problem_;
  std::shared_ptr<const RobotModel> model_;
  CandidateSet candidates_;
  std::deque<MarkerUpdate> pending_;
  std::optional<int> confirmed_id_;
  std::optional<JointTrajectory> trajectory_;
};

}  // namespace holoplan

#endif  // HOLOPLAN_SESSION_H_
