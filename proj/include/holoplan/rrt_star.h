#ifndef HOLOPLAN_RRT_STAR_H_
#define HOLOPLAN_RRT_STAR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include "holoplan/geometry.h"
#include "holoplan/random.h"

namespace holoplan {

struct PlannerSettings {
  int max_iterations = 4000;
  double step = 0.05;              // m, steering distance
  double goal_bias = 0.05;         // probability of sampling the goal
  double goal_radius = 0.02;       // m
  double neighbor_gamma = 0.0;     // <= 0: derived from the workspace volume
  double neighbor_radius_max = 0.3;  // m
  // Extra obstacle inflation applied while growing the tree, so the smoothed
  // path keeps a margin to the obstacles it was planned around.
  double clearance = 0.01;         // m
  double collision_resolution = 0.01;  // m
  double inflation = 0.05;         // m, gripper radius
  int candidates = 4;              // K
  std::uint64_t base_seed = 1;
  int resample_vertices = 100;     // M
  int timed_samples = 100;         // N_t

  void Validate() const;
};

enum class PathStatus { kProposed, kSelected, kDiscarded, kExecuted };

std::string_view PathStatusName(PathStatus s);
std::optional<PathStatus> ParsePathStatus(std::string_view name);

struct CandidatePath {
  int id = 0;
  std::vector<Vec3> waypoints;
  double cost = 0.0;  // polyline length, m
  std::uint64_t seed = 0;
  PathStatus status = PathStatus::kProposed;
};

double PolylineLength(const std::vector<Vec3>& points);

struct TreeNode {
  Vec3 position = Vec3::Zero();
  int parent = -1;
  double cost = 0.0;  // from the root along parent links
};

namespace internal {
class KdTree3;
}

// Workspace RRT*: goal-biased sampling, steering, choose-parent and
// neighborhood rewiring, run for the full iteration budget while tracking the
// best connection into the goal region.
class RrtStarPlanner {
 public:
  // Throws StartInCollision / GoalInCollision / InvalidArgument.
  RrtStarPlanner(const Vec3& start, const Vec3& goal, const Workspace& ws,
                 const PlannerSettings& settings, std::uint64_t seed);
  ~RrtStarPlanner();
  RrtStarPlanner(const RrtStarPlanner&) = delete;
  RrtStarPlanner& operator=(const RrtStarPlanner&) = delete;

  // One sample/extend/rewire iteration.
  void Step();
  int iterations() const { return iterations_; }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  // Best start-to-goal path length so far (infinity before first connection).
  double best_cost() const;
  // Start-to-goal polyline ending exactly at the goal, if connected.
  std::optional<std::vector<Vec3>> BestPath() const;
  double NeighborRadius(std::size_t n) const;

 private:
  int Insert(const Vec3& p, int parent);
  void Reparent(int node, int new_parent);
  void PropagateCost(int node);
  bool EdgeFree(const Vec3& a, const Vec3& b) const;

  Vec3 start_;
  Vec3 goal_;
  const Workspace& ws_;
  PlannerSettings settings_;
  double gamma_ = 0.0;
  RandomStream rng_;
  std::vector<TreeNode> nodes_;
  std::vector<Vec3> positions_;
  std::vector<std::vector<int>> children_;
  std::vector<int> goal_nodes_;
  std::unique_ptr<internal::KdTree3> index_;
  std::vector<int> scratch_;
  std::vector<std::pair<double, int>> by_cost_;
  int iterations_ = 0;
};

// Runs RrtStarPlanner for settings.max_iterations. Throws PlanningFailed when
// the goal region was never connected.
CandidatePath PlanRrtStar(const Vec3& start, const Vec3& goal, const Workspace& ws,
                          const PlannerSettings& settings, std::uint64_t seed);

struct RunFailure {
  int run_index = 0;
  std::uint64_t seed = 0;
  std::string reason;
};

struct CandidateBatch {
  std::vector<CandidatePath> paths;  // ordered by run index, ids = run index + 1
  std::vector<RunFailure> failures;
};

// K independent runs with seeds base_seed + i, executed concurrently. Throws
// AllRunsFailed when no run succeeds.
CandidateBatch GenerateCandidates(const Vec3& start, const Vec3& goal, const Workspace& ws,
                                  const PlannerSettings& settings, std::uint64_t base_seed,
                                  int k);

}  // namespace holoplan

#endif  // HOLOPLAN_RRT_STAR_H_
