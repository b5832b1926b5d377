#ifndef HOLOPLAN_ERROR_H_
#define HOLOPLAN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace holoplan {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidRotation,
  kUnregisteredFrame,
  kDegenerateCorrespondences,
  kDimensionMismatch,
  kInvalidModel,
  kInvalidConfig,
  kStartInCollision,
  kGoalInCollision,
  kPlanningFailed,
  kAllRunsFailed,
  kResampleCollision,
  kDegeneratePath,
  kInvalidDuration,
  kWaypointUnreachable,
  kJointJump,
  kVelocityLimitExceeded,
  kUnknownPath,
  kStaleSequence,
  kInvalidMarker,
  kNotSelected,
  kAlreadyExecuted,
  kModifiedPathInCollision,
  kSchemaVersionUnsupported,
  kMalformedScene,
  kInvalidState,
  kValidationFailed,
  kInsufficientSamples,
  kUnknownSession,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported with this type; the
// code is what callers branch on, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidRotation: return "InvalidRotation";
    case ErrorCode::kUnregisteredFrame: return "UnregisteredFrame";
    case ErrorCode::kDegenerateCorrespondences: return "DegenerateCorrespondences";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kStartInCollision: return "StartInCollision";
    case ErrorCode::kGoalInCollision: return "GoalInCollision";
    case ErrorCode::kPlanningFailed: return "PlanningFailed";
    case ErrorCode::kAllRunsFailed: return "AllRunsFailed";
    case ErrorCode::kResampleCollision: return "ResampleCollision";
    case ErrorCode::kDegeneratePath: return "DegeneratePath";
    case ErrorCode::kInvalidDuration: return "InvalidDuration";
    case ErrorCode::kWaypointUnreachable: return "WaypointUnreachable";
    case ErrorCode::kJointJump: return "JointJump";
    case ErrorCode::kVelocityLimitExceeded: return "VelocityLimitExceeded";
    case ErrorCode::kUnknownPath: return "UnknownPath";
    case ErrorCode::kStaleSequence: return "StaleSequence";
    case ErrorCode::kInvalidMarker: return "InvalidMarker";
    case ErrorCode::kNotSelected: return "NotSelected";
    case ErrorCode::kAlreadyExecuted: return "AlreadyExecuted";
    case ErrorCode::kModifiedPathInCollision: return "ModifiedPathInCollision";
    case ErrorCode::kSchemaVersionUnsupported: return "SchemaVersionUnsupported";
    case ErrorCode::kMalformedScene: return "MalformedScene";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace holoplan

#endif  // HOLOPLAN_ERROR_H_
