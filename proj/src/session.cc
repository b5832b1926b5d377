#include "holoplan/session.h"

#include <algorithm>
#include <cmath>

#include "holoplan/error.h"
#include "holoplan/json_io.h"
#include "holoplan/spline.h"

namespace holoplan {

using nlohmann::json;

std::string_view SessionStateName(SessionState s) {
  switch (s) {
    case SessionState::kIdle: return "idle";
    case SessionState::kPlanning: return "planning";
    case SessionState::kAwaitingSelection: return "awaiting_selection";
    case SessionState::kExecuting: return "executing";
    case SessionState::kDone: return "done";
    case SessionState::kFault: return "fault";
  }
  return "unknown";
}

bool IsLegalTransition(SessionState from, SessionState to) {
  using S = SessionState;
  if (to == S::kFault) return from != S::kFault;
  switch (from) {
    case S::kIdle: return to == S::kPlanning;
    case S::kPlanning: return to == S::kAwaitingSelection;
    // Replanning and scene edits while candidates are on display.
    case S::kAwaitingSelection: return to == S::kExecuting || to == S::kPlanning || to == S::kIdle;
    case S::kExecuting: return to == S::kDone;
    case S::kDone: return to == S::kIdle;
    case S::kFault: return to == S::kIdle;
  }
  return false;
}

std::uint64_t EventLog::Append(json event) {
  std::uint64_t seq;
  {
    std::lock_guard lock(mu_);
    seq = events_.size() + 1;
    event["seq"] = seq;
    events_.push_back(std::move(event));
  }
  cv_.notify_all();
  return seq;
}

std::vector<json> EventLog::Since(std::uint64_t after) const {
  std::lock_guard lock(mu_);
  if (after >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(after), events_.end()};
}

std::vector<json> EventLog::WaitSince(std::uint64_t after,
                                      std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return events_.size() > after; });
  if (after >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(after), events_.end()};
}

std::uint64_t EventLog::last_seq() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

PlanOutcome RunPlanJob(const PlanJob& job) {
  if (job.problem.frame != FrameId::kRobotBase) {
    throw Error(ErrorCode::kInvalidState, "planner input must be in the robot base frame");
  }
  const int k = job.candidates;
  std::vector<Vec3> stops{job.problem.start.position};
  for (const auto& m : job.problem.middle) stops.push_back(m.position);
  stops.push_back(job.problem.end.position);

  std::vector<std::vector<Vec3>> joined(k);
  std::vector<std::string> failure(k);
  for (std::size_t leg = 0; leg + 1 < stops.size(); ++leg) {
    const std::uint64_t seed = job.base_seed + leg * static_cast<std::uint64_t>(k);
    CandidateBatch batch;
    try {
      batch = GenerateCandidates(stops[leg], stops[leg + 1], job.problem.workspace, job.settings,
                                 seed, k);
    } catch (const Error& e) {
      throw Error(ErrorCode::kPlanningFailed, e.what());
    }
    for (const auto& f : batch.failures) {
      if (failure[f.run_index].empty()) failure[f.run_index] = f.reason;
    }
    for (const auto& p : batch.paths) {
      auto& pts = joined[p.id - 1];
      const std::size_t skip = pts.empty() ? 0 : 1;
      pts.insert(pts.end(), p.waypoints.begin() + static_cast<std::ptrdiff_t>(skip), p.waypoints.end());
    }
  }

  PlanOutcome outcome;
  for (int i = 0; i < k; ++i) {
    const std::uint64_t seed = job.base_seed + static_cast<std::uint64_t>(i);
    if (!failure[i].empty()) {
      outcome.failures.push_back({i, seed, failure[i]});
      continue;
    }
    CandidatePath raw;
    raw.id = i + 1;
    raw.seed = seed;
    raw.waypoints = std::move(joined[i]);
    raw.cost = PolylineLength(raw.waypoints);
    try {
      outcome.paths.push_back(
          ResampleUniform(raw, job.settings.resample_vertices, job.problem.workspace));
    } catch (const Error& e) {
      outcome.failures.push_back({i, seed, e.what()});
    }
  }
  if (outcome.paths.empty()) {
    std::string reasons;
    for (const auto& f : outcome.failures) {
      reasons += "\n  run " + std::to_string(f.run_index) + " (seed " + std::to_string(f.seed) +
                 "): " + f.reason;
    }
    throw Error(ErrorCode::kPlanningFailed, "no candidate survived" + reasons);
  }

  const RobotModel& model = *job.model;
  outcome.start_reachability =
      ClassifyReachability(SolveIk(model, job.problem.start, model.home(), job.ik));
  outcome.end_reachability =
      ClassifyReachability(SolveIk(model, job.problem.end, model.home(), job.ik));
  return outcome;
}

Session::Session(std::string id) : id_(std::move(id)) {}

SessionState Session::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

void Session::TransitionLocked(SessionState to) {
  if (!IsLegalTransition(state_, to)) {
    throw Error(ErrorCode::kInvalidState, "cannot go from " + std::string(SessionStateName(state_)) +
                                              " to " + std::string(SessionStateName(to)));
  }
  state_ = to;
  PublishLocked("state", {{"state", SessionStateName(to)}});
}

void Session::PublishLocked(const std::string& type, json body) {
  body["type"] = type;
  body["session"] = id_;
  events_.Append(std::move(body));
}

Vec3 Session::ToWorldLocked(const Vec3& base) const {
  return scene_->CalibrationTransform().Inverse().Apply(base);
}

Vec3 Session::ToBaseLocked(const Vec3& world) const {
  return scene_->CalibrationTransform().Apply(world);
}

void Session::PutScene(const Scene& scene, const std::filesystem::path& scene_dir) {
  scene.Validate();
  auto model = std::make_shared<const RobotModel>(LoadSceneModel(scene, scene_dir));
  BaseFrameProblem problem = ToBaseFrame(scene);
  const auto start = ClassifyReachability(SolveIk(*model, problem.start, model->home(), scene.ik));
  const auto end = ClassifyReachability(SolveIk(*model, problem.end, model->home(), scene.ik));

  std::lock_guard lock(mu_);
  if (state_ == SessionState::kPlanning || state_ == SessionState::kExecuting) {
    throw Error(ErrorCode::kInvalidState,
                "scene is locked while " + std::string(SessionStateName(state_)));
  }
  if (state_ != SessionState::kIdle) TransitionLocked(SessionState::kIdle);
  scene_ = scene;
  scene_dir_ = scene_dir;
  problem_ = std::move(problem);
  model_ = std::move(model);
  candidates_ = CandidateSet();
  pending_.clear();
  confirmed_id_.reset();
  trajectory_.reset();
  PublishLocked("scene", {{"name", scene.name}});
  for (const auto& [which, notice] : {std::pair{"start", start}, std::pair{"end", end}}) {
    json body = json_io::ToJson(notice);
    body["pose"] = which;
    PublishLocked("notice", std::move(body));
  }
}

std::optional<Scene> Session::scene() const {
  std::lock_guard lock(mu_);
  return scene_;
}

PlanJob Session::BeginPlanning(std::optional<int> candidates,
                               std::optional<std::uint64_t> base_seed) {
  std::lock_guard lock(mu_);
  if (!scene_) throw Error(ErrorCode::kInvalidState, "no scene has been loaded");
  if (state_ != SessionState::kIdle && state_ != SessionState::kAwaitingSelection) {
    throw Error(ErrorCode::kInvalidState,
                "cannot plan while " + std::string(SessionStateName(state_)));
  }
  PlanJob job;
  job.problem = *problem_;
  job.settings = scene_->planner;
  job.ik = scene_->ik;
  job.model = model_;
  job.candidates = candidates.value_or(scene_->planner.candidates);
  job.base_seed = base_seed.value_or(scene_->planner.base_seed);
  if (job.candidates < 1) throw Error(ErrorCode::kInvalidArgument, "K must be at least 1");
  TransitionLocked(SessionState::kPlanning);
  candidates_ = CandidateSet();
  pending_.clear();
  confirmed_id_.reset();
  trajectory_.reset();
  return job;
}

json Session::CandidatesMessageLocked(const PlanOutcome* outcome) const {
  json paths = json::array();
  for (const auto& p : candidates_.paths()) {
    json entry = json_io::ToJson(p);
    json markers = json::array();
    for (const auto& w : p.waypoints) markers.push_back(json_io::ToJson(ToWorldLocked(w)));
    entry["markers"] = std::move(markers);
    paths.push_back(std::move(entry));
  }
  json body = {{"frame", "world"}, {"paths", std::move(paths)}};
  if (outcome != nullptr) {
    json failures = json::array();
    for (const auto& f : outcome->failures) {
      failures.push_back({{"run", f.run_index}, {"seed", f.seed}, {"reason", f.reason}});
    }
    body["failures"] = std::move(failures);
    body["reachability"] = {{"start", json_io::ToJson(outcome->start_reachability)},
                            {"end", json_io::ToJson(outcome->end_reachability)}};
  }
  return body;
}

void Session::CompletePlanning(PlanOutcome outcome) {
  std::lock_guard lock(mu_);
  if (state_ != SessionState::kPlanning) {
    throw Error(ErrorCode::kInvalidState, "no planning job is in flight");
  }
  candidates_ = CandidateSet(id_, outcome.paths, scene_->selection.threshold,
                             scene_->selection.cadence);
  TransitionLocked(SessionState::kAwaitingSelection);
  PublishLocked("candidates", CandidatesMessageLocked(&outcome));
}

void Session::FailPlanning(const std::string& reason) {
  std::lock_guard lock(mu_);
  if (state_ != SessionState::kPlanning) return;
  PublishLocked("notice", {{"level", "fault"}, {"message", reason}});
  TransitionLocked(SessionState::kFault);
}

PlanOutcome Session::Plan(std::optional<int> candidates, std::optional<std::uint64_t> base_seed) {
  const PlanJob job = BeginPlanning(candidates, base_seed);
  PlanOutcome outcome;
  try {
    outcome = RunPlanJob(job);
  } catch (const Error& e) {
    FailPlanning(e.what());
    throw;
  }
  CompletePlanning(outcome);
  return outcome;
}

std::vector<CandidatePath> Session::candidates() const {
  std::lock_guard lock(mu_);
  return candidates_.paths();
}

std::optional<int> Session::selected_id() const {
  std::lock_guard lock(mu_);
  return candidates_.selected_id();
}

void Session::EnqueueMarkers(const std::vector<MarkerUpdate>& world_updates) {
  std::lock_guard lock(mu_);
  if (state_ != SessionState::kAwaitingSelection) {
    throw Error(ErrorCode::kInvalidState, "markers are only accepted while awaiting selection");
  }
  for (MarkerUpdate u : world_updates) {
    u.position = ToBaseLocked(u.position);
    pending_.push_back(u);
  }
}

bool Session::HasPendingMarkers() const {
  std::lock_guard lock(mu_);
  return !pending_.empty();
}

std::optional<SelectionEvent> Session::RunSelectionCycle() {
  std::lock_guard lock(mu_);
  if (state_ != SessionState::kAwaitingSelection) {
    pending_.clear();
    return std::nullopt;
  }
  std::vector<MarkerUpdate> batch(pending_.begin(), pending_.end());
  pending_.clear();
  std::stable_sort(batch.begin(), batch.end(),
                   [](const MarkerUpdate& a, const MarkerUpdate& b) { return a.sequence < b.sequence; });
  std::optional<SelectionEvent> event;
  try {
    event = candidates_.ApplyUpdatesAndDetect(batch);
  } catch (const Error& e) {
    PublishLocked("notice", {{"level", "rejected"}, {"message", e.what()}});
    throw;
  }
  if (event) PublishLocked("selection_event", json_io::ToJson(*event));
  return event;
}

SelectionEvent Session::SelectPath(int path_id) {
  std::lock_guard lock(mu_);
  if (state_ != SessionState::kAwaitingSelection) {
    throw Error(ErrorCode::kInvalidState, "no candidates to select from");
  }
  const SelectionEvent event = candidates_.Select(path_id);
  PublishLocked("selection_event", json_io::ToJson(event));
  return event;
}

void Session::Confirm(int path_id) {
  std::lock_guard lock(mu_);
  if (state_ != SessionState::kAwaitingSelection) {
    throw Error(ErrorCode::kInvalidState,
                "cannot confirm while " + std::string(SessionStateName(state_)));
  }
  const ExecutionOrder order = candidates_.Confirm(path_id, &problem_->workspace);
  confirmed_id_ = order.path_id;
  const PlannerSettings& ps = scene_->planner;
  const TrajectorySettings& ts = scene_->trajectory;
  try {
    const TimedVertices timed = CosineReparameterize(order.waypoints, ps.timed_samples);
    const ToolSchedule schedule = BuildToolSchedule(timed, problem_->start.orientation,
                                                    problem_->end.orientation, ts.duration);
    TrajectoryOptions options;
    options.joint_jump_threshold = ts.joint_jump_threshold;
    trajectory_ = BuildJointTrajectory(*model_, schedule, scene_->ik, options);
  } catch (const Error& e) {
    json body = {{"level", "fault"}, {"message", e.what()}, {"code", ErrorCodeName(e.code())}};
    if (const auto* w = dynamic_cast<const WaypointError*>(&e)) body["waypoint"] = w->index();
    PublishLocked("notice", std::move(body));
    TransitionLocked(SessionState::kFault);
    throw;
  }
  PublishLocked("confirmed", {{"path_id", order.path_id}, {"samples", trajectory_->size()}});
}

std::optional<JointTrajectory> Session::trajectory() const {
  std::lock_guard lock(mu_);
  return trajectory_;
}

std::vector<ExecutionFrame> Session::Execute(const std::function<void(double)>& pace) {
  JointTrajectory traj;
  std::shared_ptr<const RobotModel> model;
  Transform world_from_base;
  double rate;
  {
    std::lock_guard lock(mu_);
    if (state_ != SessionState::kAwaitingSelection || !trajectory_) {
      throw Error(ErrorCode::kInvalidState, "execution needs a confirmed path");
    }
    ValidationLimits limits;
    limits.acceleration = scene_->trajectory.acceleration_limit;
    const ValidationReport report =
        ValidateTrajectory(*trajectory_, *model_, problem_->protection_zones, limits);
    if (!report.ok()) {
      PublishLocked("execution_frame", {{"kind", "fault"}, {"report", json_io::ToJson(report)}});
      TransitionLocked(SessionState::kFault);
      throw Error(ErrorCode::kValidationFailed, report.Summary());
    }
    TransitionLocked(SessionState::kExecuting);
    traj = *trajectory_;
    model = model_;
    world_from_base = scene_->CalibrationTransform().Inverse();
    rate = scene_->trajectory.stream_rate;
  }

  const double duration = traj.times.back();
  std::vector<double> stamps;
  const auto steps = static_cast<std::size_t>(std::floor(duration * rate + 1e-9));
  for (std::size_t j = 0; j <= steps; ++j) stamps.push_back(static_cast<double>(j) / rate);
  if (stamps.back() < duration - 1e-9) stamps.push_back(duration);
  stamps.back() = std::min(stamps.back(), duration);

  std::vector<ExecutionFrame> frames;
  std::size_t seg = 0;
  for (const double t : stamps) {
    while (seg + 2 < traj.size() && traj.times[seg + 1] <= t) ++seg;
    ExecutionFrame f;
    f.t = t;
    if (t >= duration) {
      f.q = traj.q.back();
    } else if (traj.size() == 1) {
      f.q = traj.q.front();
    } else {
      const double a = (t - traj.times[seg]) / (traj.times[seg + 1] - traj.times[seg]);
      f.q = traj.q[seg] + a * (traj.q[seg + 1] - traj.q[seg]);
    }
    f.tool_base = ForwardKinematics(*model, f.q);
    f.tool_world = world_from_base.Apply(f.tool_base);
    if (pace) pace(t);
    {
      std::lock_guard lock(mu_);
      PublishLocked("execution_frame",
                    {{"kind", "motion"},
                     {"t", f.t},
                     {"q", std::vector<double>(f.q.data(), f.q.data() + f.q.size())},
                     {"tool_base", json_io::ToJson(f.tool_base)},
                     {"tool_world", json_io::ToJson(f.tool_world)}});
    }
    frames.push_back(std::move(f));
  }

  std::lock_guard lock(mu_);
  TransitionLocked(SessionState::kDone);
  PublishLocked("execution_frame", {{"kind", "done"}, {"t", duration}});
  return frames;
}

std::string Session::ExportTrajectory() const {
  std::lock_guard lock(mu_);
  if (!trajectory_) throw Error(ErrorCode::kInvalidState, "no trajectory has been built");
  return TrajectoryToJson(*trajectory_);
}

json Session::Snapshot() const {
  std::lock_guard lock(mu_);
  json out = {{"session", id_},
              {"state", SessionStateName(state_)},
              {"last_seq", events_.last_seq()},
              {"has_trajectory", trajectory_.has_value()}};
  if (scene_) out["candidates"] = CandidatesMessageLocked(nullptr)["paths"];
  if (const auto s = candidates_.selected_id()) out["selected"] = *s;
  if (confirmed_id_) out["confirmed"] = *confirmed_id_;
  return out;
}

}  // namespace holoplan
