#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "rydcrit/system_params.hpp"
#include "rydcrit/units.hpp"

namespace rydcrit::dynamics {

// Population coupling of the Bloch equations. Consistent: dp/dt = -Omega y - Gamma p,
// whose fixed point is the mean-field Lorentzian. Literal: dp/dt = -2 Omega y - Gamma p.
enum class RabiConvention { Consistent, Literal };

struct BlochState {
  std::complex<double> coherence{0.0, 0.0};  // rho_gr
  double population = 0.0;                   // rho_rr
  double time = 0.0;                         // s
};

struct BlochDerivative {
  std::complex<double> coherence{0.0, 0.0};
  double population = 0.0;

  double norm() const;
};

// Time derivative at detuning delta with Delta_eff = Delta - V rho_rr, in the
// units of params (per unit time of 1/params-unit).
BlochDerivative bloch_rhs(const BlochState& s, const SystemParams& p, Frequency delta,
                          RabiConvention convention = RabiConvention::Consistent);

// Full state whose population is rho and whose coherence is stationary.
BlochState stationary_state(const SystemParams& p, Frequency delta, double rho,
                            RabiConvention convention = RabiConvention::Consistent);

enum class SweepMode { Ramp, Stepwise };

// Linear detuning scan split into `bins` equal detuning intervals of equal dwell.
struct SweepProtocol {
  Frequency delta_start;
  Frequency delta_end;
  double rate = 0.0;  // |d Delta/dt|, rad/s per s
  double dwell_per_bin = 0.0;
  int bins = 0;
  SweepMode mode = SweepMode::Ramp;

  static SweepProtocol from_bins(Frequency start, Frequency end, int bins, double dwell,
                                 SweepMode mode = SweepMode::Ramp);

  void validate() const;
  double duration() const { return bins * dwell_per_bin; }
  double direction() const;
  // Detuning step per bin, rad/s (signed).
  double bin_step() const;
  // Commanded detuning at time t, rad/s.
  double detuning_at(double t) const;
  // Center of bin i, rad/s.
  double bin_center(int i) const;
  SweepProtocol reversed() const;
};

struct IntegratorOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  // Steps never exceed this fraction of a bin's dwell, so bin averages resolve the bin.
  double max_step_fraction = 1.0 / 16.0;
  double min_step = 1e-22;  // seconds
  std::int64_t max_steps = 50'000'000;
  RabiConvention convention = RabiConvention::Consistent;
};

struct IntegratorStats {
  std::int64_t steps = 0;
  std::int64_t rejected = 0;
  double max_population_excess = 0.0;  // largest excursion of rho_rr outside [0, 1]
  double max_coherence = 0.0;          // largest |rho_gr|
};

struct TrajectorySample {
  double time = 0.0;
  double detuning = 0.0;  // rad/s
  BlochState state;
};

struct SweepTrajectory {
  std::vector<TrajectorySample> samples;  // t = 0 and every bin end
  std::vector<double> bin_centers;        // rad/s
  std::vector<double> bin_mean_rho;       // time average of rho_rr over each bin
  SystemParams params;
  SweepProtocol protocol;
  IntegratorStats stats;

  // Bin centers in 2pi MHz.
  std::vector<double> bin_centers_2pi_mhz() const;
};

// Steady state on the lower (sweep up) or upper (sweep down) branch at the
// protocol's start, used when no initial state is supplied.
BlochState default_initial_state(const SystemParams& p, const SweepProtocol& protocol,
                                 RabiConvention convention = RabiConvention::Consistent);

SweepTrajectory integrate_sweep(const SystemParams& p, const SweepProtocol& protocol,
                                std::optional<BlochState> initial = std::nullopt,
                                const IntegratorOptions& options = {});

// Piecewise-constant schedule: detuning held at delta_rad[i] for `dwell` seconds.
SweepTrajectory integrate_schedule(const SystemParams& p, std::span<const double> delta_rad,
                                   double dwell, const BlochState& initial,
                                   const IntegratorOptions& options = {});

// Integrates at fixed detuning for `duration` seconds and returns the final state.
BlochState evolve(const SystemParams& p, Frequency delta, const BlochState& initial,
                  double duration, const IntegratorOptions& options = {});

struct RelaxationOptions {
  double horizon_lifetimes = 1e4;  // horizon in units of 1/Gamma
  IntegratorOptions integrator;
};

// Last time the state-space distance to the steady state exceeds 1/e of its
// initial value, after a population kick of `perturbation` away from the
// stable root nearest rho_hint (lowest root when absent).
double relaxation_time(const SystemParams& p, Frequency delta, double perturbation,
                       std::optional<double> rho_hint = std::nullopt,
                       const RelaxationOptions& options = {});

struct HysteresisLoop {
  std::vector<double> detuning;  // params' unit, ascending
  std::vector<double> rho_up;
  std::vector<double> rho_down;
  double area = 0.0;         // integral of |rho_up - rho_down| d Delta, params' unit
  double jump_up = 0.0;      // detuning of steepest change on the up sweep
  double jump_down = 0.0;
};

HysteresisLoop hysteresis_loop(const SystemParams& p, Frequency lo, Frequency hi, int bins,
                               double dwell, const IntegratorOptions& options = {});

void write_csv(const SweepTrajectory& tr, std::ostream& os);
nlohmann::ordered_json to_json(const IntegratorStats& stats);

}  // namespace rydcrit::dynamics
