#ifndef HOLOPLAN_TESTS_SUPPORT_H_
#define HOLOPLAN_TESTS_SUPPORT_H_

#include <filesystem>
#include <vector>

#include "holoplan/geometry.h"
#include "holoplan/robot_model.h"
#include "holoplan/rrt_star.h"

namespace holoplan::testing {

// One z-axis revolute joint with the tool 1 m along x.
RobotModel PlanarToyModel();

// The shipped arm with joint 3 locked at zero: a non-redundant 6-DOF chain.
RobotModel LockedJoint3Model();

// Empty 1 m box around the (0.3,0,0.3) -> (0.3,0.4,0.3) benchmark.
Workspace EmptyWorkspace();
inline const Vec3 kEmptyStart{0.3, 0.0, 0.3};
inline const Vec3 kEmptyGoal{0.3, 0.4, 0.3};

// Full-height wall across y = 0.5 with one gap at x in [0.6, 0.8].
Workspace GapWorkspace();
inline const Vec3 kGapStart{0.2, 0.2, 0.2};
inline const Vec3 kGapGoal{0.2, 0.8, 0.2};

// Shortest path length on a 26-connected occupancy grid with spacing
// `resolution` aligned to the workspace bounds. Start and goal must be grid
// nodes. Returns infinity when disconnected.
double GridDijkstra(const Workspace& ws, const Vec3& start, const Vec3& goal, double resolution);

std::filesystem::path SourceDir();

}  // namespace holoplan::testing

#endif  // HOLOPLAN_TESTS_SUPPORT_H_
