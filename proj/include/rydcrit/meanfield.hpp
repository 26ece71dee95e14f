#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rydcrit/system_params.hpp"
#include "rydcrit/units.hpp"

namespace rydcrit::meanfield {

struct Root {
  double rho = 0.0;
  bool stable = true;
};

// Real roots of the steady-state cubic at one detuning, ascending in rho.
struct SteadyStateSet {
  double detuning = 0.0;  // in the params' unit
  std::vector<Root> roots;
  int branch_count = 0;
  int discarded = 0;        // real roots outside [0, 1]
  bool degenerate = false;  // Omega == 0 short circuit
};

// f(rho) = V^2 rho^3 - 2 V D rho^2 + (D^2 + Omega^2/2 + Gamma^2/4) rho - Omega^2/4,
// evaluated in the factored form rho ((D - V rho)^2 + Omega^2/2 + Gamma^2/4) - Omega^2/4.
double cubic_value(const SystemParams& p, double delta, double rho);
double cubic_drho(const SystemParams& p, double delta, double rho);
double cubic_ddelta(const SystemParams& p, double delta, double rho);

// Right-hand side of the self-consistent population equation.
double lorentzian_population(const SystemParams& p, double effective_detuning);

SteadyStateSet steady_state_roots(const SystemParams& p, Frequency delta);

// A slope value or a divergence marker (value is then a signed infinity).
struct Slope {
  double value = 0.0;
  bool divergent = false;
};

// drho/dDelta along the steady-state manifold. Throws OffManifold when
// |f(rho)| exceeds residual_tol * Omega^2/4.
Slope slope_at(const SystemParams& p, Frequency delta, double rho, double residual_tol = 1e-8);

// Larger zero of df/drho at this detuning, when it exists.
std::optional<double> rho_threshold(const SystemParams& p, Frequency delta);
// Both zeros of df/drho, ascending.
std::optional<std::pair<double, double>> spinodal_populations(const SystemParams& p,
                                                              Frequency delta);

// Detuning of maximum slope on the rising edge, for a given population.
Frequency critical_detuning(const SystemParams& p, double rho);

// Closed-form maximum slope for a population evaluated at the critical detuning.
Slope max_slope(const SystemParams& p, double rho);

struct OperatingPoint {
  Frequency delta_c;
  double rho = 0.0;
  int iterations = 0;
};

// Fixed point of critical_detuning and steady_state_roots (damped iteration).
OperatingPoint self_consistent_critical_point(const SystemParams& p, double tol = 1e-10,
                                              int max_iterations = 200);

inline constexpr double kSaturatedBeta = 1e12;

struct Enhancement {
  double beta = 1.0;
  bool saturated = false;
};

Enhancement enhancement_ratio(const SystemParams& interacting, const SystemParams& free);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x < hi; }
  double width() const { return hi - lo; }
};

// Critical |V| above which a bistable region exists (fixed Omega, Gamma).
double critical_interaction(const SystemParams& p);

// Maximal detuning interval with three steady states, in the params' unit.
std::optional<Interval> bistable_interval(const SystemParams& p);

struct CriticalitySummary {
  Frequency delta_c;
  double rho_at_max = 0.0;
  Slope max_slope;
  std::optional<double> rho_threshold;
  Enhancement beta;
  std::optional<Interval> bistable_interval;
};

CriticalitySummary criticality(const SystemParams& p);

enum class BranchPolicy { Lower, Upper, SweepUp, SweepDown };

BranchPolicy parse_branch_policy(std::string_view name);
std::string_view to_string(BranchPolicy policy);

struct SpectrumPoint {
  double detuning = 0.0;
  double rho = 0.0;
};

// Steady-state population along a strictly monotone grid (in grid_unit).
// Sweep policies follow the branch continuously in the sweep direction.
std::vector<SpectrumPoint> spectrum(const SystemParams& p, std::span<const double> grid,
                                    FreqUnit grid_unit, BranchPolicy policy);

// Full width at half maximum of a single-peaked curve, by linear interpolation.
std::optional<double> full_width_half_max(std::span<const SpectrumPoint> curve);

}  // namespace rydcrit::meanfield
