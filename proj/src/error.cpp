#include "dbird/error.hpp"

namespace dbird {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateObservation: return "DUPLICATE_OBSERVATION";
    case ErrorCode::IndexOutOfBounds: return "INDEX_OUT_OF_BOUNDS";
    case ErrorCode::NonBinaryResponse: return "NON_BINARY_RESPONSE";
    case ErrorCode::EmptyDataset: return "EMPTY_DATASET";
    case ErrorCode::NonfiniteDifficulty: return "NONFINITE_DIFFICULTY";
    case ErrorCode::TooFewTimes: return "TOO_FEW_TIMES";
    case ErrorCode::NonfiniteTilt: return "NONFINITE_TILT";
    case ErrorCode::NonpositiveB: return "NONPOSITIVE_B";
    case ErrorCode::NotPositiveDefinite: return "NOT_POSITIVE_DEFINITE";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::VariantMismatch: return "VARIANT_MISMATCH";
    case ErrorCode::StudentOutOfRange: return "STUDENT_OUT_OF_RANGE";
    case ErrorCode::DegenerateSumOfSquares: return "DEGENERATE_SUM_OF_SQUARES";
    case ErrorCode::ChainDiverged: return "CHAIN_DIVERGED";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::LevelOutOfRange: return "LEVEL_OUT_OF_RANGE";
    case ErrorCode::EmptyInput: return "EMPTY_INPUT";
    case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::Schema: return "SCHEMA";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace dbird
