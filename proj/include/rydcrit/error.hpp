#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rydcrit {

enum class Errc {
  InvalidArgument,
  UnitMismatch,
  OffManifold,
  NonInteracting,
  UnknownPolicy,
  StepFailure,
  NoConvergence,
  BadCalibration,
  InsufficientBins,
  ZeroVariance,
  NonpositiveFisher,
  DegenerateSpread,
  EmptyInput,
  ZeroDerivative,
  Validation,
  Io,
};

std::string_view to_string(Errc code);

// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rydcrit
