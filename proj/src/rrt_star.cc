#include "holoplan/rrt_star.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "holoplan/error.h"
#include "kd_tree.h"

namespace holoplan {

void PlannerSettings::Validate() const {
  if (max_iterations <= 0 || !(step > 0.0) || !(goal_radius > 0.0) ||
      !(neighbor_radius_max > 0.0) || !(collision_resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "planner sizes and budgets must be positive");
  }
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "goal_bias must lie in [0, 1]");
  }
  if (!(clearance >= 0.0) || !(inflation >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "clearance and inflation must be non-negative");
  }
  if (candidates < 1 || resample_vertices < 2 || timed_samples < 2) {
    throw Error(ErrorCode::kInvalidConfig, "need K >= 1, M >= 2 and N_t >= 2");
  }
}

std::string_view PathStatusName(PathStatus s) {
  switch (s) {
    case PathStatus::kProposed: return "proposed";
    case PathStatus::kSelected: return "selected";
    case PathStatus::kDiscarded: return "discarded";
    case PathStatus::kExecuted: return "executed";
  }
  return "unknown";
}

std::optional<PathStatus> ParsePathStatus(std::string_view name) {
  for (PathStatus s : {PathStatus::kProposed, PathStatus::kSelected, PathStatus::kDiscarded,
                       PathStatus::kExecuted}) {
    if (PathStatusName(s) == name) return s;
  }
  return std::nullopt;
}

double PolylineLength(const std::vector<Vec3>& points) {
  double length = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) length += (points[i] - points[i - 1]).norm();
  return length;
}

RrtStarPlanner::RrtStarPlanner(const Vec3& start, const Vec3& goal, const Workspace& ws,
                               const PlannerSettings& settings, std::uint64_t seed)
    : start_(start), goal_(goal), ws_(ws), settings_(settings), rng_(seed) {
  settings_.Validate();
  ws_.Validate();
  if (!ws_.PointFree(start_)) {
    throw Error(ErrorCode::kStartInCollision, "start is outside C_free");
  }
  if (!ws_.PointFree(goal_)) {
    throw Error(ErrorCode::kGoalInCollision, "goal is outside C_free");
  }
  // Without room for the clearance at the endpoints, plan against C_free itself.
  if (!ws_.PointFree(start_, settings_.clearance) || !ws_.PointFree(goal_, settings_.clearance)) {
    settings_.clearance = 0.0;
  }

  gamma_ = settings_.neighbor_gamma;
  if (gamma_ <= 0.0) {
    // gamma > 2 (1 + 1/d)^(1/d) (mu(X_free) / zeta_d)^(1/d) for d = 3.
    const double zeta = 4.0 / 3.0 * M_PI;
    gamma_ = 2.0 * std::cbrt(4.0 / 3.0) * std::cbrt(ws_.bounds.Volume() / zeta);
  }

  index_ = std::make_unique<internal::KdTree3>(&positions_);
  const std::size_t reserve = static_cast<std::size_t>(settings_.max_iterations) + 1;
  nodes_.reserve(reserve);
  positions_.reserve(reserve);
  children_.reserve(reserve);
  Insert(start_, -1);
}

RrtStarPlanner::~RrtStarPlanner() = default;

double RrtStarPlanner::NeighborRadius(std::size_t n) const {
  if (n < 2) return settings_.neighbor_radius_max;
  const double dn = static_cast<double>(n);
  return std::min(settings_.neighbor_radius_max, gamma_ * std::cbrt(std::log(dn) / dn));
}

bool RrtStarPlanner::EdgeFree(const Vec3& a, const Vec3& b) const {
  return ws_.SegmentFree(a, b, settings_.clearance);
}

int RrtStarPlanner::Insert(const Vec3& p, int parent) {
  const int id = static_cast<int>(nodes_.size());
  TreeNode node;
  node.position = p;
  node.parent = parent;
  node.cost = parent < 0 ? 0.0 : nodes_[parent].cost + (p - nodes_[parent].position).norm();
  nodes_.push_back(node);
  positions_.push_back(p);
  children_.emplace_back();
  if (parent >= 0) children_[parent].push_back(id);
  index_->Insert(id);
  return id;
}

void RrtStarPlanner::Reparent(int node, int new_parent) {
  auto& siblings = children_[nodes_[node].parent];
  siblings.erase(std::find(siblings.begin(), siblings.end(), node));
  children_[new_parent].push_back(node);
  nodes_[node].parent = new_parent;
  PropagateCost(node);
}

void RrtStarPlanner::PropagateCost(int node) {
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    const TreeNode& parent = nodes_[nodes_[n].parent];
    nodes_[n].cost = parent.cost + (nodes_[n].position - parent.position).norm();
    stack.insert(stack.end(), children_[n].begin(), children_[n].end());
  }
}

void RrtStarPlanner::Step() {
  ++iterations_;
  Vec3 target;
  if (rng_.Uniform() < settings_.goal_bias) {
    target = goal_;
  } else {
    const Aabb& b = ws_.bounds;
    for (int i = 0; i < 3; ++i) target[i] = rng_.Uniform(b.min[i], b.max[i]);
  }

  const int nearest = index_->Nearest(target);
  const Vec3 from = nodes_[nearest].position;
  const double dist = (target - from).norm();
  if (dist < 1e-12) return;
  const Vec3 x_new = dist <= settings_.step ? target : Vec3(from + (target - from) * (settings_.step / dist));
  if (!ws_.PointFree(x_new, settings_.clearance)) return;

  index_->Radius(x_new, NeighborRadius(nodes_.size() + 1), scratch_);
  if (std::find(scratch_.begin(), scratch_.end(), nearest) == scratch_.end()) {
    scratch_.push_back(nearest);
  }
  std::sort(scratch_.begin(), scratch_.end());

  // Choose parent: cheapest neighbor whose edge is collision-free. Candidates
  // are scanned by cost with ties going to the lower index; the first free
  // edge usually ends the scan, so no full sort is needed.
  by_cost_.clear();
  for (int nb : scratch_) {
    by_cost_.emplace_back(nodes_[nb].cost + (x_new - nodes_[nb].position).norm(), nb);
  }
  int parent = -1;
  for (std::size_t remaining = by_cost_.size(); remaining > 0 && parent < 0; --remaining) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < remaining; ++i) {
      if (by_cost_[i] < by_cost_[best]) best = i;
    }
    const int nb = by_cost_[best].second;
    if (EdgeFree(nodes_[nb].position, x_new)) {
      parent = nb;
    } else {
      std::swap(by_cost_[best], by_cost_[remaining - 1]);
    }
  }
  if (parent < 0) return;
  const int id = Insert(x_new, parent);

  // Rewire neighbors through the new node when that shortens their route.
  for (int nb : scratch_) {
    if (nb == parent) continue;
    const double via = nodes_[id].cost + (nodes_[nb].position - x_new).norm();
    if (via < nodes_[nb].cost - 1e-12 && EdgeFree(x_new, nodes_[nb].position)) {
      Reparent(nb, id);
    }
  }

  if ((x_new - goal_).norm() <= settings_.goal_radius && EdgeFree(x_new, goal_)) {
    goal_nodes_.push_back(id);
  }
}

double RrtStarPlanner::best_cost() const {
  double best = std::numeric_limits<double>::infinity();
  for (int g : goal_nodes_) {
    best = std::min(best, nodes_[g].cost + (nodes_[g].position - goal_).norm());
  }
  return best;
}

std::optional<std::vector<Vec3>> RrtStarPlanner::BestPath() const {
  int best_node = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int g : goal_nodes_) {
    const double c = nodes_[g].cost + (nodes_[g].position - goal_).norm();
    if (c < best) {
      best = c;
      best_node = g;
    }
  }
  if (best_node < 0) return std::nullopt;
  std::vector<Vec3> path;
  for (int n = best_node; n >= 0; n = nodes_[n].parent) path.push_back(nodes_[n].position);
  std::reverse(path.begin(), path.end());
  if ((path.back() - goal_).norm() > 0.0) path.push_back(goal_);
  return path;
}

CandidatePath PlanRrtStar(const Vec3& start, const Vec3& goal, const Workspace& ws,
                          const PlannerSettings& settings, std::uint64_t seed) {
  RrtStarPlanner planner(start, goal, ws, settings, seed);
  while (planner.iterations() < settings.max_iterations) planner.Step();
  auto path = planner.BestPath();
  if (!path) {
    throw Error(ErrorCode::kPlanningFailed, "goal region not reached after " +
                                                std::to_string(settings.max_iterations) +
                                                " iterations");
  }
  CandidatePath out;
  out.waypoints = std::move(*path);
  out.cost = PolylineLength(out.waypoints);
  out.seed = seed;
  return out;
}

CandidateBatch GenerateCandidates(const Vec3& start, const Vec3& goal, const Workspace& ws,
                                  const PlannerSettings& settings, std::uint64_t base_seed,
                                  int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "K must be at least 1");
  std::vector<std::future<CandidatePath>> runs;
  runs.reserve(k);
  for (int i = 0; i < k; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    runs.push_back(std::async(std::launch::async, [&, seed] {
      return PlanRrtStar(start, goal, ws, settings, seed);
    }));
  }
  CandidateBatch batch;
  for (int i = 0; i < k; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    try {
      CandidatePath p = runs[i].get();
      p.id = i + 1;
      batch.paths.push_back(std::move(p));
    } catch (const Error& e) {
      batch.failures.push_back({i, seed, e.what()});
    }
  }
  if (batch.paths.empty()) {
    std::string reasons;
    for (const auto& f : batch.failures) {
      reasons += "\n  run " + std::to_string(f.run_index) + " (seed " + std::to_string(f.seed) +
                 "): " + f.reason;
    }
    throw Error(ErrorCode::kAllRunsFailed, "all " + std::to_string(k) + " runs failed" + reasons);
  }
  return batch;
}

}  // namespace holoplan
