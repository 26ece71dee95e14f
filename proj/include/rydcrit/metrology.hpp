#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydcrit/detector.hpp"
#include "rydcrit/dynamics.hpp"
#include "rydcrit/fits.hpp"
#include "rydcrit/mwfield.hpp"
#include "rydcrit/system_params.hpp"

namespace rydcrit::metrology {

struct SlopeEstimate {
  double slope = 0.0;
  double stderr_ = 0.0;
  std::size_t first = 0;  // bins used: [first, last]
  std::size_t last = 0;
};

// Least-squares slope of mean counts over bins [i - window, i + window], i the
// bin nearest `at`. The axis must be uniform enough for a local linear fit.
SlopeEstimate local_slope(const detector::CountScan& scan, double at, int window);
SlopeEstimate local_slope_at(const detector::CountScan& scan, std::size_t bin, int window);

enum class VarianceSource { Analytic, Empirical };

struct FisherCurve {
  std::string axis_label;
  std::vector<double> axis;
  std::vector<double> fisher;
  std::vector<double> slope;
  std::vector<double> slope_stderr;
  std::vector<double> variance;
  std::vector<double> variance_term;  // zero unless requested
  int window = 0;
  VarianceSource source = VarianceSource::Analytic;
  bool include_variance_term = false;

  std::size_t argmax() const;
  double max() const { return fisher.at(argmax()); }
};

// F = slope^2 / Var on every bin with a full window, plus the variance-dependence
// term (d Var / d theta)^2 / (2 Var^2) when requested.
FisherCurve fisher_curve(const detector::CountScan& scan, int window,
                         bool include_variance_term = false,
                         VarianceSource source = VarianceSource::Analytic);

double cramer_rao(double fisher, double repetitions = 1.0);

// Dwell-time ladder: at each dwell the sweep is re-run with that dwell per bin
// and the peak Fisher information of the resulting scan is recorded.
struct DwellPoint {
  double dwell = 0.0;
  double fisher_max = 0.0;   // per (axis unit)^2
  double axis_at_max = 0.0;
};

struct DwellLadder {
  std::vector<DwellPoint> points;
  fits::PowerLawFit fit;
};

struct LadderConfig {
  dynamics::SweepProtocol protocol;  // dwell_per_bin is overridden per rung
  detector::DetectorParams detector;
  detector::TransmissionMap map;
  int window = 2;
  double t0 = 1e-6;
  dynamics::IntegratorOptions integrator;
};

// Builds the analytic count scan of a completed sweep (axis in 2pi MHz).
detector::CountScan sweep_scan(const dynamics::SweepTrajectory& tr,
                               const detector::DetectorParams& det,
                               const detector::TransmissionMap& map);

DwellLadder dwell_ladder(const SystemParams& p, const LadderConfig& config,
                         std::span<const double> dwells, bool parallel = false);

// Field estimation from a scan whose axis is the MW amplitude.
struct FieldRegion {
  double lo = 0.0;
  double hi = 0.0;
};

struct SensitivityReport {
  double slope = 0.0;        // k, counts per axis unit
  double slope_stderr = 0.0;
  double offset = 0.0;       // x0 in y = k (x + x0)
  double variance = 0.0;     // per-sample count variance used for delta E
  double field_error = 0.0;  // delta E = sqrt(Var) / |k|, axis unit
  double dwell = 0.0;
  double sensitivity = 0.0;  // delta E sqrt(dwell)
  bool flat = false;         // slope indistinguishable from zero; field_error is inf
  std::optional<double> fisher_ratio;         // (k^2/Var) / (k_ref^2/Var_ref)
  std::optional<double> fisher_ratio_shared;  // k^2 / k_ref^2
  std::optional<double> slope_ratio;          // k / k_ref
};

SensitivityReport field_response(const detector::CountScan& scan, FieldRegion region,
                                 const SensitivityReport* reference = nullptr);

inline double equivalent_sensitivity(double field_error, double dwell) {
  return field_error * std::sqrt(dwell);
}

// delta Delta / (d delta / d E) at the operating amplitude. ZeroDerivative at E = 0.
double shift_uncertainty_to_field(double shift_uncertainty, const mwfield::MWField& field);
// Amplitude whose full shift equals the uncertainty: the bound that applies
// when the derivative vanishes.
double zero_field_bound(double shift_uncertainty, const mwfield::MWField& field);

// Count scan over an amplitude ladder at fixed probe detuning. Each rung holds the
// shifted detuning for `dwell`; the system carries its state from rung to rung.
struct FieldScanConfig {
  double probe_detuning = 0.0;  // params' unit
  mwfield::MWField mw;          // amplitude overridden by the ladder
  double dwell = 5e-6;
  detector::DetectorParams detector;
  detector::TransmissionMap map;
  dynamics::IntegratorOptions integrator;
};

struct FieldScan {
  detector::CountScan scan;        // axis in V/cm
  std::vector<double> shift;       // rad/s per rung
  std::vector<double> rho;         // bin-averaged population per rung
};

FieldScan field_scan(const SystemParams& p, const FieldScanConfig& config,
                     std::span<const double> amplitudes);

// Empirical FI from the spread of maximum-likelihood shift estimates. The model
// returns the per-bin transmission for a global shift theta.
using TransmissionModel = std::function<std::vector<double>(double theta)>;

struct MonteCarloConfig {
  double theta = 0.0;
  double derivative_step = 0.0;  // 0 picks 1e-2 of the estimator spread
  double dwell = 20e-6;
  detector::DetectorParams detector;
  detector::CountModel model = detector::CountModel::Gaussian;
  int trials = 10000;
  int grid_points = 241;
  double grid_sigmas = 6.0;
  bool parallel = true;
};

struct MonteCarloFisher {
  double analytic_fisher = 0.0;
  double cramer_rao = 0.0;
  double estimator_mean = 0.0;
  double estimator_variance = 0.0;
  double empirical_fisher = 0.0;
  double variance_rel_stderr = 0.0;  // sqrt(2 / (trials - 1))
  int trials = 0;
};

MonteCarloFisher monte_carlo_fisher(const TransmissionModel& model, const MonteCarloConfig& config);

void write_csv(const FisherCurve& curve, std::ostream& os);
nlohmann::ordered_json to_json(const FisherCurve& curve);
nlohmann::ordered_json to_json(const SensitivityReport& report);
nlohmann::ordered_json to_json(const DwellLadder& ladder);
nlohmann::ordered_json to_json(const MonteCarloFisher& mc);

}  // namespace rydcrit::metrology
