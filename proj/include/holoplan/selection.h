#ifndef HOLOPLAN_SELECTION_H_
#define HOLOPLAN_SELECTION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holoplan/geometry.h"
#include "holoplan/rrt_star.h"

namespace holoplan {

inline constexpr double kDefaultSelectionThreshold = 0.01;  // m per cycle
inline constexpr double kDefaultSelectionCadence = 60.0;    // Hz

// Sum of distances between consecutive markers. Throws DegeneratePath for
// fewer than two markers.
double PathLengthMetric(const std::vector<Vec3>& markers);

struct MarkerUpdate {
  int path_id = 0;
  int marker_index = 0;
  Vec3 position = Vec3::Zero();
  std::uint64_t sequence = 0;
};

struct SelectionEvent {
  int selected_id = 0;
  double delta = 0.0;  // metric change that triggered the selection, m
  std::vector<int> discarded;
  std::uint64_t cycle = 0;
};

struct ExecutionOrder {
  int path_id = 0;
  std::vector<Vec3> waypoints;  // current marker positions
};

// Candidate paths of one session together with their live marker positions.
// The owning session loop is the only writer.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::string session_id, std::vector<CandidatePath> paths,
               double threshold = kDefaultSelectionThreshold,
               double cadence_hz = kDefaultSelectionCadence);

  const std::string& session_id() const { return session_id_; }
  const std::vector<CandidatePath>& paths() const { return paths_; }
  // Throws UnknownPath.
  const CandidatePath& path(int id) const;
  std::optional<int> selected_id() const;
  double threshold() const { return threshold_; }
  double cadence_hz() const { return cadence_hz_; }
  std::uint64_t last_sequence() const { return last_sequence_; }
  std::uint64_t cycles() const { return cycles_; }

  // One update cycle: applies the updates in order, then compares each
  // proposed path's metric against the previous cycle. When any change
  // exceeds the threshold the largest change (then lowest id) is Selected and
  // every other path Discarded. Updates to discarded paths are ignored.
  // The batch is rejected as a whole on UnknownPath, InvalidMarker or
  // StaleSequence.
  std::optional<SelectionEvent> ApplyUpdatesAndDetect(std::span<const MarkerUpdate> updates);

  // Selects a path directly, as the auto-select rules do. Throws UnknownPath,
  // InvalidState when a path is already selected or executed.
  SelectionEvent Select(int path_id);

  // Marks the selected path Executed. When `ws` is given its current markers
  // are re-checked against C_free first. Throws UnknownPath, NotSelected,
  // AlreadyExecuted, ModifiedPathInCollision.
  ExecutionOrder Confirm(int path_id, const Workspace* ws = nullptr);

  // At most one path is Selected or Executed; once one is, all others are
  // Discarded.
  bool PartitionHolds() const;

 private:
  CandidatePath& MutablePath(int id);
  SelectionEvent Commit(int winner, double delta);

  std::string session_id_;
  std::vector<CandidatePath> paths_;
  std::vector<double> previous_metric_;
  double threshold_ = kDefaultSelectionThreshold;
  double cadence_hz_ = kDefaultSelectionCadence;
  std::uint64_t last_sequence_ = 0;
  std::uint64_t cycles_ = 0;
};

}  // namespace holoplan

#endif  // HOLOPLAN_SELECTION_H_
