#include "holoplan/scenario.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "holoplan/json_io.h"
#include "holoplan/scene.h"
#include "holoplan/service.h"

namespace holoplan {

namespace {

using nlohmann::json;

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& ref) {
  const std::filesystem::path p(ref);
  return p.is_absolute() ? p : base / p;
}

SelectRule ParseRule(const std::string& name) {
  if (name == "first") return SelectRule::kFirst;
  if (name == "lowest-cost") return SelectRule::kLowestCost;
  if (name == "trace" || name == "scripted-trace") return SelectRule::kTrace;
  throw Error(ErrorCode::kInvalidArgument, "unknown select rule '" + name + "'");
}

void WriteEventLog(const Session& session, const std::filesystem::path& out_dir) {
  std::string lines;
  for (const auto& e : session.events().Since(0)) lines += e.dump() + "\n";
  WriteFile(out_dir / "execution_log.jsonl", lines);
}

json CandidatesFile(const Session& session) {
  for (const auto& e : session.events().Since(0)) {
    if (e.at("type") == "candidates") return e;
  }
  return json::object();
}

// Replays the trace cycle by cycle; returns the selected id, if any.
std::optional<int> ReplayTrace(Session& session, const MarkerTrace& trace, std::ostream& log) {
  const Transform world_from_base = session.scene()->CalibrationTransform().Inverse();
  std::uint64_t seq = session.events().last_seq();
  for (std::size_t c = 0; c < trace.cycles.size(); ++c) {
    const auto paths = session.candidates();
    std::vector<MarkerUpdate> updates;
    for (const auto& t : trace.cycles[c]) {
      const auto it = std::find_if(paths.begin(), paths.end(),
                                   [&](const CandidatePath& p) { return p.id == t.path_id; });
      if (it == paths.end()) {
        throw Error(ErrorCode::kUnknownPath, "trace names path " + std::to_string(t.path_id));
      }
      if (t.marker < 0 || t.marker >= static_cast<int>(it->waypoints.size())) {
        throw Error(ErrorCode::kInvalidMarker, "trace marker " + std::to_string(t.marker));
      }
      MarkerUpdate u;
      u.path_id = t.path_id;
      u.marker_index = t.marker;
      u.sequence = ++seq;
      u.position = t.position ? *t.position
                              : Vec3(world_from_base.Apply(it->waypoints[t.marker]) + *t.offset);
      updates.push_back(u);
    }
    session.EnqueueMarkers(updates);
    if (const auto event = session.RunSelectionCycle()) {
      log << "cycle " << c << ": path " << event->selected_id << " selected (delta "
          << event->delta * 1000.0 << " mm)\n";
      return event->selected_id;
    }
  }
  return std::nullopt;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPlanningFailed:
    case ErrorCode::kAllRunsFailed:
    case ErrorCode::kStartInCollision:
    case ErrorCode::kGoalInCollision:
    case ErrorCode::kResampleCollision:
    case ErrorCode::kDegeneratePath:
      return kExitPlanningFailed;
    case ErrorCode::kWaypointUnreachable:
    case ErrorCode::kJointJump:
    case ErrorCode::kVelocityLimitExceeded:
      return kExitUnreachableWaypoint;
    case ErrorCode::kValidationFailed:
      return kExitValidationFailed;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidRotation:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kInvalidModel:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kSchemaVersionUnsupported:
    case ErrorCode::kMalformedScene:
    case ErrorCode::kInsufficientSamples:
    case ErrorCode::kIoError:
    case ErrorCode::kUnknownPath:
    case ErrorCode::kInvalidMarker:
    case ErrorCode::kStaleSequence:
      return kExitBadInput;
    default:
      return kExitFailure;
  }
}

void ScenarioScript::Validate() const {
  using K = ScenarioAction::Kind;
  bool planned = false, selected = false, confirmed = false, executed = false;
  for (const auto& a : actions) {
    switch (a.kind) {
      case K::kPlan:
        if (confirmed) throw Error(ErrorCode::kInvalidArgument, "plan after confirm");
        planned = true;
        selected = false;
        break;
      case K::kSelect:
        if (!planned || selected) throw Error(ErrorCode::kInvalidArgument, "select needs a fresh plan");
        selected = true;
        break;
      case K::kConfirm:
        if (!selected || confirmed) throw Error(ErrorCode::kInvalidArgument, "confirm needs a selection");
        confirmed = true;
        break;
      case K::kExecute:
        if (!confirmed || executed) throw Error(ErrorCode::kInvalidArgument, "execute needs a confirm");
        executed = true;
        break;
      case K::kExport:
        if (!confirmed) throw Error(ErrorCode::kInvalidArgument, "export needs a confirm");
        break;
    }
  }
}

ScenarioScript LoadScenarioScript(const std::filesystem::path& path) {
  const json doc = ReadJsonFile(path);
  const auto base = path.parent_path();
  ScenarioScript script;
  try {
    script.scene = Resolve(base, doc.at("scene").get<std::string>());
    for (const auto& a : doc.at("actions")) {
      ScenarioAction action;
      const std::string kind = a.at("action").get<std::string>();
      if (kind == "plan") {
        action.kind = ScenarioAction::Kind::kPlan;
        if (a.contains("candidates")) action.candidates = a.at("candidates").get<int>();
        if (a.contains("seed")) action.seed = a.at("seed").get<std::uint64_t>();
      } else if (kind == "select") {
        action.kind = ScenarioAction::Kind::kSelect;
        action.rule = ParseRule(a.value("rule", std::string("lowest-cost")));
        if (action.rule == SelectRule::kTrace) {
          action.trace = Resolve(base, a.at("trace").get<std::string>());
        }
      } else if (kind == "confirm") {
        action.kind = ScenarioAction::Kind::kConfirm;
      } else if (kind == "execute") {
        action.kind = ScenarioAction::Kind::kExecute;
      } else if (kind == "export") {
        action.kind = ScenarioAction::Kind::kExport;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown action '" + kind + "'");
      }
      script.actions.push_back(action);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  script.Validate();
  return script;
}

MarkerTrace LoadMarkerTrace(const std::filesystem::path& path) {
  const json doc = ReadJsonFile(path);
  MarkerTrace trace;
  try {
    trace.cadence_hz = doc.value("cadence_hz", 60.0);
    for (const auto& cycle : doc.at("cycles")) {
      std::vector<TraceUpdate> updates;
      for (const auto& u : cycle.value("updates", json::array())) {
        TraceUpdate t;
        t.path_id = u.at("path_id").get<int>();
        t.marker = u.at("marker").get<int>();
        if (u.contains("position")) t.position = json_io::Vec3FromJson(u.at("position"));
        if (u.contains("offset")) t.offset = json_io::Vec3FromJson(u.at("offset"));
        if (t.position.has_value() == t.offset.has_value()) {
          throw Error(ErrorCode::kInvalidArgument, "trace update needs exactly one of position, offset");
        }
        updates.push_back(t);
      }
      trace.cycles.push_back(std::move(updates));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  return trace;
}

ScenarioResult RunScenario(const ScenarioScript& script, const std::filesystem::path& out_dir,
                           std::ostream& log) {
  ScenarioResult result;
  std::shared_ptr<Session> session;
  try {
    script.Validate();
    std::filesystem::create_directories(out_dir);
    const Scene scene = LoadSceneFile(script.scene);
    ServiceConfig config;
    config.scene_dir = script.scene.parent_path();
    Service service(config);
    session = service.Get(service.CreateSession());
    session->PutScene(scene, config.scene_dir);
    log << "scene '" << scene.name << "' loaded\n";

    for (const auto& action : script.actions) {
      switch (action.kind) {
        case ScenarioAction::Kind::kPlan: {
          service.SubmitPlan(session->id(), action.candidates, action.seed).get();
          const auto paths = session->candidates();
          log << "planned " << paths.size() << " candidate(s):";
          for (const auto& p : paths) log << " #" << p.id << "=" << p.cost << "m";
          log << "\n";
          WriteFile(out_dir / "candidates.json", CandidatesFile(*session).dump(1) + "\n");
          break;
        }
        case ScenarioAction::Kind::kSelect: {
          const auto paths = session->candidates();
          std::optional<int> chosen;
          if (action.rule == SelectRule::kFirst) {
            chosen = paths.front().id;
            session->SelectPath(*chosen);
          } else if (action.rule == SelectRule::kLowestCost) {
            chosen = std::min_element(paths.begin(), paths.end(),
                                      [](const CandidatePath& a, const CandidatePath& b) {
                                        return a.cost < b.cost;
                                      })->id;
            session->SelectPath(*chosen);
          } else {
            chosen = ReplayTrace(*session, LoadMarkerTrace(action.trace), log);
            if (!chosen) throw Error(ErrorCode::kInvalidState, "trace selected no path");
          }
          result.selected_id = chosen;
          const Transform world_from_base = scene.CalibrationTransform().Inverse();
          json markers = json::array();
          for (const auto& p : session->candidates()) {
            if (p.id != *chosen) continue;
            for (const auto& w : p.waypoints) markers.push_back(json_io::ToJson(world_from_base.Apply(w)));
          }
          WriteFile(out_dir / "selected_path.json",
                    json({{"path_id", *chosen}, {"frame", "world"}, {"markers", markers}}).dump(1) + "\n");
          log << "selected path " << *chosen << "\n";
          break;
        }
        case ScenarioAction::Kind::kConfirm:
          session->Confirm(*session->selected_id());
          log << "confirmed; trajectory has " << session->trajectory()->size() << " samples\n";
          break;
        case ScenarioAction::Kind::kExecute: {
          const auto frames = session->Execute();
          log << "executed " << frames.size() << " frames\n";
          break;
        }
        case ScenarioAction::Kind::kExport:
          WriteFile(out_dir / "trajectory.json", session->ExportTrajectory());
          log << "trajectory written to " << (out_dir / "trajectory.json").string() << "\n";
          break;
      }
    }
  } catch (const Error& e) {
    result.exit_code = ExitCodeFor(e.code());
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitFailure;
    result.message = e.what();
  }
  if (session) {
    try {
      WriteEventLog(*session, out_dir);
    } catch (const Error&) {
    }
  }
  if (result.exit_code != kExitOk) log << "error: " << result.message << "\n";
  return result;
}

ScenarioResult RunPlanCommand(const std::filesystem::path& scene, std::optional<int> candidates,
                              std::optional<std::uint64_t> seed,
                              const std::filesystem::path& out_dir, std::ostream& log) {
  ScenarioScript script;
  script.scene = scene;
  ScenarioAction plan;
  plan.candidates = candidates;
  plan.seed = seed;
  script.actions.push_back(plan);
  return RunScenario(script, out_dir, log);
}

}  // namespace holoplan
