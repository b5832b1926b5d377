#ifndef HOLOPLAN_SRC_KD_TREE_H_
#define HOLOPLAN_SRC_KD_TREE_H_

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "holoplan/se3.h"

namespace holoplan::internal {

// Incremental 3-D kd-tree over externally stored points. Points are only ever
// added; indices are the caller's point indices. The tree is rebuilt balanced
// whenever it doubles, which keeps the depth logarithmic at amortized
// O(log n) per insert.
class KdTree3 {
 public:
  explicit KdTree3(const std::vector<Vec3>* points) : points_(points) {}

  void Insert(int index) {
    if (nodes_.size() >= next_rebuild_) {
      Rebuild(index);
      next_rebuild_ = 2 * nodes_.size();
      return;
    }
    const Vec3& p = (*points_)[index];
    nodes_.push_back({{p.x(), p.y(), p.z()}, index, -1, -1});
    const int id = static_cast<int>(nodes_.size()) - 1;
    if (id == 0) return;
    int cur = 0;
    int depth = 0;
    while (true) {
      const int axis = depth % 3;
      Node& n = nodes_[cur];
      const bool left = p[axis] < n.x[axis];
      int& child = left ? n.left : n.right;
      if (child < 0) {
        child = id;
        return;
      }
      cur = child;
      ++depth;
    }
  }

  // Index of the nearest stored point; ties resolve to the earliest visited.
  int Nearest(const Vec3& q) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    if (!nodes_.empty()) Nearest(0, 0, q, best, best_d2);
    return best;
  }

  void Radius(const Vec3& q, double r, std::vector<int>& out) const {
    out.clear();
    if (nodes_.empty()) return;
    const double r2 = r * r;
    stack_.clear();
    stack_.push_back({0, 0});
    while (!stack_.empty()) {
      const auto [id, depth] = stack_.back();
      stack_.pop_back();
      const Node& n = nodes_[id];
      const double dx = q[0] - n.x[0], dy = q[1] - n.x[1], dz = q[2] - n.x[2];
      if (dx * dx + dy * dy + dz * dz <= r2) out.push_back(n.point);
      const int axis = depth % 3;
      const double diff = q[axis] - n.x[axis];
      if (n.right >= 0 && diff + r >= 0.0) stack_.push_back({n.right, depth + 1});
      if (n.left >= 0 && diff - r <= 0.0) stack_.push_back({n.left, depth + 1});
    }
  }

 private:
  void Rebuild(int extra) {
    std::vector<int> ids;
    ids.reserve(nodes_.size() + 1);
    for (const Node& n : nodes_) ids.push_back(n.point);
    ids.push_back(extra);
    nodes_.clear();
    Build(ids.begin(), ids.end(), 0);
  }

  int Build(std::vector<int>::iterator first, std::vector<int>::iterator last, int depth) {
    if (first == last) return -1;
    const int axis = depth % 3;
    const auto mid = first + (last - first) / 2;
    std::nth_element(first, mid, last, [&](int a, int b) {
      const double pa = (*points_)[a][axis], pb = (*points_)[b][axis];
      return pa < pb || (pa == pb && a < b);
    });
    const Vec3& p = (*points_)[*mid];
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({{p.x(), p.y(), p.z()}, *mid, -1, -1});
    const int left = Build(first, mid, depth + 1);
    const int right = Build(mid + 1, last, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  // Coordinates are copied in so queries stay within the node array.
  struct Node {
    double x[3];
    int point;
    int left;
    int right;
  };

  void Nearest(int id, int depth, const Vec3& q, int& best, double& best_d2) const {
    const Node& n = nodes_[id];
    const double dx = q[0] - n.x[0], dy = q[1] - n.x[1], dz = q[2] - n.x[2];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = n.point;
    }
    const int axis = depth % 3;
    const double diff = q[axis] - n.x[axis];
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    if (near >= 0) Nearest(near, depth + 1, q, best, best_d2);
    if (far >= 0 && diff * diff < best_d2) Nearest(far, depth + 1, q, best, best_d2);
  }

  const std::vector<Vec3>* points_;
  std::vector<Node> nodes_;
  std::size_t next_rebuild_ = 64;
  mutable std::vector<std::pair<int, int>> stack_;  // (node, depth)
};

}  // namespace holoplan::internal

#endif  // HOLOPLAN_SRC_KD_TREE_H_
