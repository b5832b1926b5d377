#include "holoplan/selection.h"

#include <algorithm>
#include <set>

#include "holoplan/error.h"

namespace holoplan {

double PathLengthMetric(const std::vector<Vec3>& markers) {
  if (markers.size() < 2) {
    throw Error(ErrorCode::kDegeneratePath, "metric needs at least two markers");
  }
  return PolylineLength(markers);
}

CandidateSet::CandidateSet(std::string session_id, std::vector<CandidatePath> paths,
                           double threshold, double cadence_hz)
    : session_id_(std::move(session_id)),
      paths_(std::move(paths)),
      threshold_(threshold),
      cadence_hz_(cadence_hz) {
  if (!(threshold_ > 0.0) || !(cadence_hz_ > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "selection threshold and cadence must be positive");
  }
  std::set<int> ids;
  for (const auto& p : paths_) {
    if (!ids.insert(p.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate path id " + std::to_string(p.id));
    }
    previous_metric_.push_back(PathLengthMetric(p.waypoints));
  }
}

const CandidatePath& CandidateSet::path(int id) const {
  for (const auto& p : paths_) {
    if (p.id == id) return p;
  }
  throw Error(ErrorCode::kUnknownPath, "no path with id " + std::to_string(id));
}

CandidatePath& CandidateSet::MutablePath(int id) {
  return const_cast<CandidatePath&>(std::as_const(*this).path(id));
}

std::optional<int> CandidateSet::selected_id() const {
  for (const auto& p : paths_) {
    if (p.status == PathStatus::kSelected) return p.id;
  }
  return std::nullopt;
}

std::optional<SelectionEvent> CandidateSet::ApplyUpdatesAndDetect(
    std::span<const MarkerUpdate> updates) {
  std::uint64_t seq = last_sequence_;
  for (const auto& u : updates) {
    const CandidatePath& p = path(u.path_id);
    if (u.marker_index < 0 || u.marker_index >= static_cast<int>(p.waypoints.size())) {
      throw Error(ErrorCode::kInvalidMarker, "marker " + std::to_string(u.marker_index) +
                                                 " out of range for path " +
                                                 std::to_string(u.path_id));
    }
    if (!u.position.allFinite()) {
      throw Error(ErrorCode::kInvalidMarker, "marker position must be finite");
    }
    if (u.sequence <= seq) {
      throw Error(ErrorCode::kStaleSequence, "sequence " + std::to_string(u.sequence) +
                                                 " is not after " + std::to_string(seq));
    }
    seq = u.sequence;
  }

  ++cycles_;
  for (const auto& u : updates) {
    CandidatePath& p = MutablePath(u.path_id);
    if (p.status == PathStatus::kDiscarded) continue;
    p.waypoints[u.marker_index] = u.position;
  }
  last_sequence_ = seq;

  const bool open = std::all_of(paths_.begin(), paths_.end(), [](const CandidatePath& p) {
    return p.status == PathStatus::kProposed;
  });
  int winner = -1;
  double best_delta = 0.0;
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const double metric = PolylineLength(paths_[i].waypoints);
    const double delta = std::abs(metric - previous_metric_[i]);
    previous_metric_[i] = metric;
    if (!open || delta <= threshold_) continue;
    if (winner < 0 || delta > best_delta ||
        (delta == best_delta && paths_[i].id < paths_[winner].id)) {
      winner = static_cast<int>(i);
      best_delta = delta;
    }
  }
  if (winner < 0) return std::nullopt;
  return Commit(winner, best_delta);
}

SelectionEvent CandidateSet::Commit(int winner, double delta) {
  SelectionEvent event;
  event.selected_id = paths_[winner].id;
  event.delta = delta;
  event.cycle = cycles_;
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (static_cast<int>(i) == winner) {
      paths_[i].status = PathStatus::kSelected;
    } else {
      paths_[i].status = PathStatus::kDiscarded;
      event.discarded.push_back(paths_[i].id);
    }
  }
  return event;
}

SelectionEvent CandidateSet::Select(int path_id) {
  path(path_id);
  for (const auto& p : paths_) {
    if (p.status != PathStatus::kProposed) {
      throw Error(ErrorCode::kInvalidState, "a path has already been selected");
    }
  }
  const auto it = std::find_if(paths_.begin(), paths_.end(),
                               [&](const CandidatePath& p) { return p.id == path_id; });
  return Commit(static_cast<int>(it - paths_.begin()), 0.0);
}

ExecutionOrder CandidateSet::Confirm(int path_id, const Workspace* ws) {
  CandidatePath& p = MutablePath(path_id);
  if (p.status == PathStatus::kExecuted) {
    throw Error(ErrorCode::kAlreadyExecuted, "path " + std::to_string(path_id) + " already executed");
  }
  if (p.status != PathStatus::kSelected) {
    throw Error(ErrorCode::kNotSelected, "path " + std::to_string(path_id) + " is " +
                                             std::string(PathStatusName(p.status)));
  }
  if (ws != nullptr) {
    for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
      if (!ws->SegmentFree(p.waypoints[i - 1], p.waypoints[i])) {
        throw Error(ErrorCode::kModifiedPathInCollision,
                    "segment " + std::to_string(i - 1) + " of path " + std::to_string(path_id) +
                        " leaves C_free");
      }
    }
  }
  p.status = PathStatus::kExecuted;
  p.cost = PolylineLength(p.waypoints);
  return {p.id, p.waypoints};
}

bool CandidateSet::PartitionHolds() const {
  int chosen = 0;
  int discarded = 0;
  for (const auto& p : paths_) {
    if (p.status == PathStatus::kSelected || p.status == PathStatus::kExecuted) ++chosen;
    if (p.status == PathStatus::kDiscarded) ++discarded;
  }
  if (chosen == 0) return discarded == 0;
  return chosen == 1 && discarded == static_cast<int>(paths_.size()) - 1;
}

}  // namespace holoplan
