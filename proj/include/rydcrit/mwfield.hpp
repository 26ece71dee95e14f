#pragma once

#include <span>
#include <string>
#include <vector>

#include "rydcrit/units.hpp"

namespace rydcrit::mwfield {

struct MWField {
  double amplitude = 0.0;     // E_mw, V/cm
  double mw_detuning = 0.0;   // Delta_mw, rad/s
  double coupling = 0.0;      // kappa, rad/s per V/cm
  double frequency_ghz = 0.0; // carrier label only
  std::string label;

  double rabi() const { return coupling * amplitude; }  // Omega_mw, rad/s
  MWField with_amplitude(double e) const;
  void validate() const;
};

// delta = -Delta_mw/2 + sqrt(Delta_mw^2 + Omega_mw^2)/2, rad/s.
double stark_shift(const MWField& field);
// d delta / d E_mw, rad/s per V/cm.
double stark_shift_derivative(const MWField& field);

// The shift moves the resonance to the red: the effective probe detuning
// becomes Delta + delta.
inline double shifted_detuning(double delta, double shift) { return delta + shift; }

struct ShiftPoint {
  double amplitude = 0.0;  // V/cm
  double shift = 0.0;      // rad/s
};

// Elementwise shift over a nonnegative ascending amplitude ladder.
std::vector<ShiftPoint> shift_curve(std::span<const double> amplitudes, const MWField& base);

// Coupling that makes `amplitude` produce `shift` at the given MW detuning.
double calibrate_coupling(double amplitude, double shift, double mw_detuning);

// Amplitude producing `shift` (exact inverse of stark_shift).
double amplitude_for_shift(double shift, const MWField& base);

}  // namespace rydcrit::mwfield
