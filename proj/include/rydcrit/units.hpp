#pragma once

#include <numbers>
#include <string>
#include <string_view>

namespace rydcrit {

// Angular frequencies are carried either in rad/s (canonical) or as the value
// of f/2pi in MHz, i.e. "2pi x MHz". One MHz-unit equals 2*pi*1e6 rad/s.
enum class FreqUnit { RadPerSecond, TwoPiMHz };

inline constexpr double kRadPerSecondPerTwoPiMHz = 2.0 * std::numbers::pi * 1e6;

std::string_view to_string(FreqUnit unit);

double convert(double value, FreqUnit from, FreqUnit to);

struct Frequency {
  double value = 0.0;
  FreqUnit unit = FreqUnit::RadPerSecond;

  Frequency in(FreqUnit target) const { return {convert(value, unit, target), target}; }
  double rad_per_s() const { return convert(value, unit, FreqUnit::RadPerSecond); }
  double two_pi_mhz() const { return convert(value, unit, FreqUnit::TwoPiMHz); }
};

inline Frequency mhz2pi(double v) { return {v, FreqUnit::TwoPiMHz}; }
inline Frequency rad_s(double v) { return {v, FreqUnit::RadPerSecond}; }

// Throws Errc::UnitMismatch when the two tags differ.
void require_same_unit(FreqUnit expected, FreqUnit got, std::string_view what);

}  // namespace rydcrit
