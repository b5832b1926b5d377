#ifndef HOLOPLAN_SERVICE_H_
#define HOLOPLAN_SERVICE_H_

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "holoplan/rrt_star.h"
#include "holoplan/session.h"

namespace holoplan {

// Fixed-size pool running fire-and-forget jobs in submission order.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::future<void> Submit(std::function<void()> job);

 private:
  void Loop();

  std::mutex mu_;
  std::condition_variable cv_;
  std::queue<std::packaged_task<void()>> jobs_;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

struct ServiceConfig {
  int workers = 2;
  PlannerSettings default_planner;
  // Pace execution frames in wall-clock time (server mode).
  bool realtime_execution = false;
  // Directory against which scene model references resolve.
  std::filesystem::path scene_dir;
};

// Session registry plus the transport-agnostic message handler behind the
// wire protocol. Planning and execution run on the worker pool.
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();

  const ServiceConfig& config() const { return config_; }

  std::string CreateSession();
  // Throws UnknownSession.
  std::shared_ptr<Session> Get(const std::string& id) const;
  std::vector<std::shared_ptr<Session>> Sessions() const;

  std::future<void> SubmitPlan(const std::string& id, std::optional<int> candidates = std::nullopt,
                               std::optional<std::uint64_t> base_seed = std::nullopt);
  std::future<void> SubmitExecution(const std::string& id);

  // One selection cycle for every session with queued marker updates.
  void TickSelection();

  // {"op": ..., "session": ..., ...} -> {"ok": true, ...} or
  // {"ok": false, "error": {"code", "message"}}. Never throws.
  nlohmann::json Handle(const nlohmann::json& request);

 private:
  nlohmann::json Dispatch(const nlohmann::json& request);

  ServiceConfig config_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  WorkerPool pool_;
};

}  // namespace holoplan

#endif  // HOLOPLAN_SERVICE_H_
