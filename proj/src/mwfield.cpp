#include "rydcrit/mwfield.hpp"

#include <cmath>

#include "rydcrit/error.hpp"

namespace rydcrit::mwfield {

MWField MWField::with_amplitude(double e) const {
  MWField f = *this;
  f.amplitude = e;
  return f;
}

void MWField::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw Error(Errc::InvalidArgument, "MW amplitude must be finite and >= 0");
  if (!(coupling > 0.0) || !std::isfinite(coupling))
    throw Error(Errc::InvalidArgument, "MW coupling must be positive");
  if (!std::isfinite(mw_detuning)) throw Error(Errc::InvalidArgument, "MW detuning must be finite");
}

double stark_shift(const MWField& field) {
  field.validate();
  const double d = field.mw_detuning;
  const double om = field.rabi();
  if (d == 0.0) return 0.5 * om;
  const double root = std::hypot(d, om);
  // For d > 0 the difference form cancels; use the rationalized form instead.
  if (d >= 0.0) return root == 0.0 ? 0.0 : 0.5 * om * om / (root + d);
  return 0.5 * (root - d);
}

double stark_shift_derivative(const MWField& field) {
  field.validate();
  const double root = std::hypot(field.mw_detuning, field.rabi());
  if (root == 0.0) return 0.5 * field.coupling;
  return 0.5 * field.coupling * field.rabi() / root;
}

std::vector<ShiftPoint> shift_curve(std::span<const double> amplitudes, const MWField& base) {
  std::vector<ShiftPoint> out;
  out.reserve(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (!(amplitudes[i] >= 0.0))
      throw Error(Errc::InvalidArgument, "MW amplitudes must be nonnegative");
    if (i > 0 && amplitudes[i] < amplitudes[i - 1])
      throw Error(Errc::InvalidArgument, "MW amplitudes must be ascending");
    out.push_back({amplitudes[i], stark_shift(base.with_amplitude(amplitudes[i]))});
  }
  return out;
}

double calibrate_coupling(double amplitude, double shift, double mw_detuning) {
  if (!(amplitude > 0.0) || !(shift > 0.0))
    throw Error(Errc::BadCalibration, "calibration needs positive amplitude and shift");
  const double q = shift * (shift + mw_detuning);
  if (!(q > 0.0)) throw Error(Errc::BadCalibration, "shift unreachable at this MW detuning");
  return 2.0 * std::sqrt(q) / amplitude;
}

double amplitude_for_shift(double shift, const MWField& base) {
  base.validate();
  if (!(shift >= 0.0)) throw Error(Errc::InvalidArgument, "shift must be nonnegative");
  const double q = shift * (shift + base.mw_detuning);
  if (q < 0.0) throw Error(Errc::InvalidArgument, "shift unreachable at this MW detuning");
  return 2.0 * std::sqrt(q) / base.coupling;
}

}  // namespace rydcrit::mwfield
