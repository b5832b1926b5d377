#include "support.h"

#include <cmath>
#include <limits>
#include <queue>

namespace holoplan::testing {

RobotModel PlanarToyModel() {
  JointDescriptor j;
  j.name = "z";
  j.axis = Vec3::UnitZ();
  j.lower = -M_PI;
  j.upper = M_PI;
  return RobotModel("toy", {j}, Transform::FromTranslation({1.0, 0.0, 0.0}));
}

RobotModel LockedJoint3Model() {
  const RobotModel arm = RobotModel::LoadDefault();
  std::vector<JointDescriptor> joints = arm.joints();
  joints[3].origin = Compose(joints[2].origin, joints[3].origin);
  joints.erase(joints.begin() + 2);
  JointVector home(6);
  home << arm.home()[0], arm.home()[1], arm.home()[3], arm.home()[4], arm.home()[5],
      arm.home()[6];
  return RobotModel("locked-j3", joints, arm.tool_offset(), home);
}

Workspace EmptyWorkspace() {
  Workspace ws;
  ws.bounds = {{-0.2, -0.3, 0.0}, {0.8, 0.7, 0.6}};
  return ws;
}

Workspace GapWorkspace() {
  Workspace ws;
  ws.bounds = {{0.0, 0.0, 0.0}, {1.0, 1.0, 0.4}};
  Box left;
  left.center = {0.3, 0.5, 0.2};
  left.half_extents = {0.3, 0.02, 0.2};
  Box right;
  right.center = {0.9, 0.5, 0.2};
  right.half_extents = {0.1, 0.02, 0.2};
  ws.obstacles.push_back({"wall-left", left, 0.0});
  ws.obstacles.push_back({"wall-right", right, 0.0});
  return ws;
}

double GridDijkstra(const Workspace& ws, const Vec3& start, const Vec3& goal, double resolution) {
  const Vec3 extent = ws.bounds.max - ws.bounds.min;
  const int nx = static_cast<int>(std::round(extent.x() / resolution)) + 1;
  const int ny = static_cast<int>(std::round(extent.y() / resolution)) + 1;
  const int nz = static_cast<int>(std::round(extent.z() / resolution)) + 1;
  auto index = [&](int i, int j, int k) { return (static_cast<long>(k) * ny + j) * nx + i; };
  auto cell = [&](const Vec3& p) {
    const Vec3 c = (p - ws.bounds.min) / resolution;
    return std::array<int, 3>{static_cast<int>(std::lround(c.x())), static_cast<int>(std::lround(c.y())),
                              static_cast<int>(std::lround(c.z()))};
  };
  const long total = static_cast<long>(nx) * ny * nz;
  std::vector<char> free(total);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const Vec3 p = ws.bounds.min + resolution * Vec3(i, j, k);
        free[index(i, j, k)] = ws.PointFree(p) ? 1 : 0;
      }
    }
  }
  const auto s = cell(start);
  const auto g = cell(goal);
  std::vector<double> dist(total, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const long source = index(s[0], s[1], s[2]);
  const long target = index(g[0], g[1], g[2]);
  dist[source] = 0.0;
  open.push({0.0, source});
  while (!open.empty()) {
    const auto [d, n] = open.top();
    open.pop();
    if (d > dist[n]) continue;
    if (n == target) return d;
    const int i = static_cast<int>(n % nx);
    const int j = static_cast<int>((n / nx) % ny);
    const int k = static_cast<int>(n / (static_cast<long>(nx) * ny));
    for (int dk = -1; dk <= 1; ++dk) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0 && dk == 0) continue;
          const int a = i + di, b = j + dj, c = k + dk;
          if (a < 0 || b < 0 || c < 0 || a >= nx || b >= ny || c >= nz) continue;
          const long m = index(a, b, c);
          if (!free[m]) continue;
          const double nd = d + resolution * std::sqrt(double(di * di + dj * dj + dk * dk));
          if (nd < dist[m]) {
            dist[m] = nd;
            open.push({nd, m});
          }
        }
      }
    }
  }
  return std::numeric_limits<double>::infinity();
}

std::filesystem::path SourceDir() { return HOLOPLAN_DATA_DIR; }

}  // namespace holoplan::testing
