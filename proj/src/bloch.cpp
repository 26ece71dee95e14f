#include <cmath>

#include "rydcrit/dynamics.hpp"

namespace rydcrit::dynamics {

double BlochDerivative::norm() const {
  return std::sqrt(std::norm(coherence) + population * population);
}

BlochDerivative bloch_rhs(const BlochState& s, const SystemParams& p, Frequency delta,
                          RabiConvention convention) {
  require_same_unit(p.unit(), delta.unit, "detuning");
  const double om = p.rabi();
  const double g = p.gamma();
  const double x = s.coherence.real();
  const double y = s.coherence.imag();
  const double pop = s.population;
  const double de = delta.value - p.interaction() * pop;
  const double pop_coupling = convention == RabiConvention::Consistent ? om : 2.0 * om;
  BlochDerivative d;
  d.coherence = {-de * y - 0.5 * g * x, 0.5 * om * (2.0 * pop - 1.0) + de * x - 0.5 * g * y};
  d.population = -pop_coupling * y - g * pop;
  return d;
}

BlochState stationary_state(const SystemParams& p, Frequency delta, double rho,
                            RabiConvention) {
  require_same_unit(p.unit(), delta.unit, "detuning");
  const double om = p.rabi();
  const double g = p.gamma();
  const double de = delta.value - p.interaction() * rho;
  const double w = 2.0 * rho - 1.0;
  const double den = 0.25 * g * g + de * de;
  BlochState s;
  s.population = rho;
  s.coherence = {-0.5 * om * w * de / den, 0.5 * om * w * 0.5 * g / den};
  return s;
}

}  // namespace rydcrit::dynamics
