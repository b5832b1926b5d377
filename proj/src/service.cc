#include "holoplan/service.h"

#include <chrono>

#include "holoplan/error.h"
#include "holoplan/json_io.h"

namespace holoplan {

using nlohmann::json;

WorkerPool::WorkerPool(int workers) {
  for (int i = 0; i < std::max(1, workers); ++i) threads_.emplace_back([this] { Loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& t : threads_) t.join();
}

std::future<void> WorkerPool::Submit(std::function<void()> job) {
  std::packaged_task<void()> task(std::move(job));
  auto future = task.get_future();
  {
    std::lock_guard lock(mu_);
    jobs_.push(std::move(task));
  }
  cv_.notify_one();
  return future;
}

void WorkerPool::Loop() {
  for (;;) {
    std::packaged_task<void()> task;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return stopping_ || !jobs_.empty(); });
      if (jobs_.empty()) return;
      task = std::move(jobs_.front());
      jobs_.pop();
    }
    task();
  }
}

Service::Service(ServiceConfig config) : config_(std::move(config)), pool_(config_.workers) {}

Service::~Service() = default;

std::string Service::CreateSession() {
  std::lock_guard lock(mu_);
  std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::make_shared<Session>(id));
  return id;
}

std::shared_ptr<Session> Service::Get(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kUnknownSession, "no session '" + id + "'");
  return it->second;
}

std::vector<std::shared_ptr<Session>> Service::Sessions() const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<Session>> out;
  for (const auto& [id, s] : sessions_) out.push_back(s);
  return out;
}

std::future<void> Service::SubmitPlan(const std::string& id, std::optional<int> candidates,
                                      std::optional<std::uint64_t> base_seed) {
  auto session = Get(id);
  // The state change happens synchronously so a second request is refused.
  PlanJob job = session->BeginPlanning(candidates, base_seed);
  return pool_.Submit([session, job = std::move(job)] {
    try {
      session->CompletePlanning(RunPlanJob(job));
    } catch (const std::exception& e) {
      session->FailPlanning(e.what());
      throw;
    }
  });
}

std::future<void> Service::SubmitExecution(const std::string& id) {
  auto session = Get(id);
  const bool realtime = config_.realtime_execution;
  return pool_.Submit([session, realtime] {
    const auto start = std::chrono::steady_clock::now();
    std::function<void(double)> pace;
    if (realtime) {
      pace = [start](double t) {
        std::this_thread::sleep_until(start + std::chrono::duration<double>(t));
      };
    }
    session->Execute(pace);
  });
}

void Service::TickSelection() {
  for (const auto& s : Sessions()) {
    if (!s->HasPendingMarkers()) continue;
    try {
      s->RunSelectionCycle();
    } catch (const Error&) {
      // Already published to the session as a notice.
    }
  }
}

json Service::Handle(const json& request) {
  try {
    json reply = Dispatch(request);
    reply["ok"] = true;
    return reply;
  } catch (const Error& e) {
    return {{"ok", false}, {"error", {{"code", ErrorCodeName(e.code())}, {"message", e.what()}}}};
  } catch (const json::exception& e) {
    return {{"ok", false}, {"error", {{"code", "InvalidArgument"}, {"message", e.what()}}}};
  } catch (const std::exception& e) {
    return {{"ok", false}, {"error", {{"code", "Internal"}, {"message", e.what()}}}};
  }
}

json Service::Dispatch(const json& request) {
  const std::string op = request.at("op").get<std::string>();
  if (op == "create_session") return {{"session", CreateSession()}};

  const std::string id = request.at("session").get<std::string>();
  const auto session = Get(id);
  if (op == "put_scene") {
    const Scene scene = LoadScene(request.at("scene").dump(), config_.default_planner);
    session->PutScene(scene, config_.scene_dir);
    return {{"state", SessionStateName(session->state())}};
  }
  if (op == "get_scene") {
    const auto scene = session->scene();
    if (!scene) throw Error(ErrorCode::kInvalidState, "no scene has been loaded");
    return {{"scene", json::parse(SaveScene(*scene))}};
  }
  if (op == "plan") {
    std::optional<int> k;
    std::optional<std::uint64_t> seed;
    if (request.contains("candidates")) k = request.at("candidates").get<int>();
    if (request.contains("seed")) seed = request.at("seed").get<std::uint64_t>();
    SubmitPlan(id, k, seed);
    return {{"state", SessionStateName(session->state())}};
  }
  if (op == "markers") {
    std::vector<MarkerUpdate> updates;
    for (const auto& u : request.at("updates")) updates.push_back(json_io::MarkerUpdateFromJson(u));
    session->EnqueueMarkers(updates);
    return {{"queued", updates.size()}};
  }
  if (op == "select") {
    return {{"event", json_io::ToJson(session->SelectPath(request.at("path_id").get<int>()))}};
  }
  if (op == "confirm") {
    session->Confirm(request.at("path_id").get<int>());
    if (request.value("execute", true)) SubmitExecution(id);
    return {{"state", SessionStateName(session->state())}};
  }
  if (op == "execute") {
    SubmitExecution(id);
    return {};
  }
  if (op == "export_trajectory") {
    return {{"trajectory", json::parse(session->ExportTrajectory())}};
  }
  if (op == "events") {
    const auto after = request.value("after", std::uint64_t{0});
    return {{"events", session->events().Since(after)}};
  }
  if (op == "state") return session->Snapshot();
  throw Error(ErrorCode::kInvalidArgument, "unknown op '" + op + "'");
}

}  // namespace holoplan
