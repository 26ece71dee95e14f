#include <cmath>

#include "rydcrit/error.hpp"
#include "rydcrit/system_params.hpp"
#include "rydcrit/units.hpp"

namespace rydcrit {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::UnitMismatch: return "UnitMismatch";
    case Errc::OffManifold: return "OffManifold";
    case Errc::NonInteracting: return "NonInteracting";
    case Errc::UnknownPolicy: return "UnknownPolicy";
    case Errc::StepFailure: return "StepFailure";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::BadCalibration: return "BadCalibration";
    case Errc::InsufficientBins: return "InsufficientBins";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::NonpositiveFisher: return "NonpositiveFisher";
    case Errc::DegenerateSpread: return "DegenerateSpread";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ZeroDerivative: return "ZeroDerivative";
    case Errc::Validation: return "Validation";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(FreqUnit unit) {
  return unit == FreqUnit::RadPerSecond ? "rad/s" : "2pi*MHz";
}

double convert(double value, FreqUnit from, FreqUnit to) {
  if (from == to) return value;
  if (from == FreqUnit::TwoPiMHz) return value * kRadPerSecondPerTwoPiMHz;
  return value / kRadPerSecondPerTwoPiMHz;
}

void require_same_unit(FreqUnit expected, FreqUnit got, std::string_view what) {
  if (expected != got) {
    throw Error(Errc::UnitMismatch, std::string(what) + " is in " + std::string(to_string(got)) +
                                        " but parameters are in " +
                                        std::string(to_string(expected)));
  }
}

SystemParams::SystemParams(double rabi, double gamma, double interaction, FreqUnit unit,
                           std::string label)
    : rabi_(rabi), gamma_(gamma), interaction_(interaction), unit_(unit), label_(std::move(label)) {
  if (!(std::isfinite(gamma) && gamma > 0.0))
    throw Error(Errc::InvalidArgument, "gamma must be finite and > 0");
  if (!(std::isfinite(rabi) && rabi >= 0.0))
    throw Error(Errc::InvalidArgument, "rabi must be finite and >= 0");
  if (!std::isfinite(interaction))
    throw Error(Errc::InvalidArgument, "interaction must be finite");
}

SystemParams SystemParams::in(FreqUnit target) const {
  return {convert(rabi_, unit_, target), convert(gamma_, unit_, target),
          convert(interaction_, unit_, target), target, label_};
}

SystemParams SystemParams::with_interaction(double v) const {
  return {rabi_, gamma_, v, unit_, label_};
}

SystemParams SystemParams::with_rabi(double rabi) const {
  return {rabi, gamma_, interaction_, unit_, label_};
}

}  // namespace rydcrit
