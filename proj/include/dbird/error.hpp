#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbird {

enum class ErrorCode {
  DuplicateObservation,
  IndexOutOfBounds,
  NonBinaryResponse,
  EmptyDataset,
  NonfiniteDifficulty,
  TooFewTimes,
  NonfiniteTilt,
  NonpositiveB,
  NotPositiveDefinite,
  DimensionMismatch,
  VariantMismatch,
  StudentOutOfRange,
  DegenerateSumOfSquares,
  ChainDiverged,
  NoConvergence,
  LevelOutOfRange,
  EmptyInput,
  InvalidConfig,
  Schema,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dbird
