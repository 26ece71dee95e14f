#pragma once

#include <string>

#include "rydcrit/units.hpp"

namespace rydcrit {

// Effective two-level model: Rabi frequency, decay rate and mean-field
// interaction strength, all in one unit system.
class SystemParams {
 public:
  SystemParams(double rabi, double gamma, double interaction, FreqUnit unit,
               std::string label = {});

  static SystemParams from_2pi_mhz(double rabi, double gamma, double interaction,
                                   std::string label = {}) {
    return {rabi, gamma, interaction, FreqUnit::TwoPiMHz, std::move(label)};
  }

  double rabi() const { return rabi_; }
  double gamma() const { return gamma_; }
  double interaction() const { return interaction_; }
  FreqUnit unit() const { return unit_; }
  const std::string& label() const { return label_; }

  SystemParams in(FreqUnit target) const;
  SystemParams with_interaction(double v) const;
  SystemParams with_rabi(double rabi) const;

  Frequency frequency(double v) const { return {v, unit_}; }

  // Gamma^2 + 2 Omega^2, appears in every linewidth / criticality formula.
  double saturation_width_sq() const { return gamma_ * gamma_ + 2.0 * rabi_ * rabi_; }

 private:
  double rabi_;
  double gamma_;
  double interaction_;
  FreqUnit unit_;
  std::string label_;
};

}  // namespace rydcrit
