#include "rydcrit/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rydcrit/csv.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/kernels.hpp"
#include "rydcrit/meanfield.hpp"

namespace rydcrit::metrology {

namespace {

std::size_t nearest_bin(const detector::CountScan& scan, double at) {
  if (scan.bins.empty()) throw Error(Errc::InsufficientBins, "empty scan");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.bins.size(); ++i)
    if (std::abs(scan.bins[i].axis - at) < std::abs(scan.bins[best].axis - at)) best = i;
  return best;
}

fits::LinearFit window_fit(const detector::CountScan& scan, std::size_t first, std::size_t last,
                           auto value) {
  std::vector<double> x, y;
  x.reserve(last - first + 1);
  y.reserve(last - first + 1);
  for (std::size_t i = first; i <= last; ++i) {
    x.push_back(scan.bins[i].axis);
    y.push_back(value(scan.bins[i]));
  }
  return fits::linear_fit(x, y);
}

}  // namespace

SlopeEstimate local_slope_at(const detector::CountScan& scan, std::size_t bin, int window) {
  if (window < 2) throw Error(Errc::InsufficientBins, "slope window must be >= 2 bins");
  const auto w = static_cast<std::size_t>(window);
  if (bin < w || bin + w >= scan.bins.size())
    throw Error(Errc::InsufficientBins, "slope window extends past the scan");
  const auto fit = window_fit(scan, bin - w, bin + w,
                              [](const detector::CountBin& b) { return b.mean_counts; });
  return {fit.slope, fit.slope_stderr, bin - w, bin + w};
}

SlopeEstimate local_slope(const detector::CountScan& scan, double at, int window) {
  return local_slope_at(scan, nearest_bin(scan, at), window);
}

std::size_t FisherCurve::argmax() const {
  if (fisher.empty()) throw Error(Errc::InsufficientBins, "empty Fisher curve");
  return static_cast<std::size_t>(std::max_element(fisher.begin(), fisher.end()) - fisher.begin());
}

FisherCurve fisher_curve(const detector::CountScan& scan, int window, bool include_variance_term,
                         VarianceSource source) {
  if (window < 2) throw Error(Errc::InsufficientBins, "slope window must be >= 2 bins");
  const auto w = static_cast<std::size_t>(window);
  const std::size_t n = scan.bins.size();
  if (n < 2 * w + 1) throw Error(Errc::InsufficientBins, "scan shorter than the slope window");
  FisherCurve c;
  c.axis_label = scan.axis_label;
  c.window = window;
  c.source = source;
  c.include_variance_term = include_variance_term;
  auto var_of = [source](const detector::CountBin& b) {
    return source == VarianceSource::Analytic ? b.variance : b.empirical_variance();
  };
  for (std::size_t i = w; i + w < n; ++i) {
    const double var = var_of(scan.bins[i]);
    if (!(var > 0.0)) throw Error(Errc::ZeroVariance, "bin variance is not positive");
    const auto s = local_slope_at(scan, i, window);
    double term = 0.0;
    if (include_variance_term) {
      const double dvar = window_fit(scan, i - w, i + w, var_of).slope;
      term = dvar * dvar / (2.0 * var * var);
    }
    c.axis.push_back(scan.bins[i].axis);
    c.slope.push_back(s.slope);
    c.slope_stderr.push_back(s.stderr_);
    c.variance.push_back(var);
    c.variance_term.push_back(term);
    c.fisher.push_back(s.slope * s.slope / var + term);
  }
  return c;
}

double cramer_rao(double fisher, double repetitions) {
  if (!(fisher > 0.0)) throw Error(Errc::NonpositiveFisher, "Fisher information must be > 0");
  if (!(repetitions >= 1.0)) throw Error(Errc::InvalidArgument, "repetitions must be >= 1");
  return 1.0 / std::sqrt(repetitions * fisher);
}

detector::CountScan sweep_scan(const dynamics::SweepTrajectory& tr,
                               const detector::DetectorParams& det,
                               const detector::TransmissionMap& map) {
  const auto axis = tr.bin_centers_2pi_mhz();
  const auto eps = detector::transmission_map(tr.bin_mean_rho, map);
  return detector::analytic_scan("delta_2pi_MHz", axis, eps, det, tr.protocol.dwell_per_bin);
}

DwellLadder dwell_ladder(const SystemParams& p, const LadderConfig& config,
                         std::span<const double> dwells, bool parallel) {
  if (dwells.size() < 3) throw Error(Errc::InsufficientBins, "dwell ladder needs >= 3 rungs");
  DwellLadder out;
  out.points.resize(dwells.size());
  const auto n = static_cast<std::ptrdiff_t>(dwells.size());
  std::vector<std::string> errors(dwells.size());
  std::vector<int> codes(dwells.size(), -1);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      const auto pr = dynamics::SweepProtocol::from_bins(
          config.protocol.delta_start, config.protocol.delta_end, config.protocol.bins, dwells[k],
          config.protocol.mode);
      const auto tr = dynamics::integrate_sweep(p, pr, std::nullopt, config.integrator);
      const auto scan = sweep_scan(tr, config.detector, config.map);
      const auto curve = fisher_curve(scan, config.window);
      const std::size_t i = curve.argmax();
      out.points[k] = {dwells[k], curve.fisher[i], curve.axis[i]};
    } catch (const Error& e) {
      codes[k] = static_cast<int>(e.code());
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < codes.size(); ++k)
    if (codes[k] >= 0) throw Error(static_cast<Errc>(codes[k]), errors[k]);
  std::vector<double> t, f;
  for (const auto& pt : out.points) {
    t.push_back(pt.dwell);
    f.push_back(pt.fisher_max);
  }
  out.fit = fits::fit_power_law(t, f, config.t0);
  return out;
}

SensitivityReport field_response(const detector::CountScan& scan, FieldRegion region,
                                 const SensitivityReport* reference) {
  if (!(region.hi > region.lo)) throw Error(Errc::InvalidArgument, "empty fit region");
  std::vector<double> x, y;
  double var = 0.0;
  double dwell = 0.0;
  for (const auto& b : scan.bins) {
    if (b.axis < region.lo || b.axis > region.hi) continue;
    x.push_back(b.axis);
    y.push_back(b.mean_counts);
    var += b.variance;
    dwell = b.dwell;
  }
  if (x.size() < 3) throw Error(Errc::InsufficientBins, "fit region holds fewer than 3 bins");
  var /= static_cast<double>(x.size());
  const auto fit = fits::linear_fit(x, y);
  SensitivityReport r;
  r.slope = fit.slope;
  r.slope_stderr = fit.slope_stderr;
  r.variance = var;
  r.dwell = dwell;
  const double span = x.back() - x.front();
  r.flat = fit.slope == 0.0 || !(std::abs(fit.slope) > 3.0 * fit.slope_stderr) ||
           std::abs(fit.slope) * std::abs(span) <= 1e-9 * std::sqrt(var);
  if (r.flat) {
    r.field_error = std::numeric_limits<double>::infinity();
    r.sensitivity = std::numeric_limits<double>::infinity();
  } else {
    r.offset = fit.intercept / fit.slope;
    r.field_error = std::sqrt(var) / std::abs(fit.slope);
    r.sensitivity = equivalent_sensitivity(r.field_error, dwell);
  }
  if (reference && !reference->flat && reference->slope != 0.0) {
    r.slope_ratio = r.slope / reference->slope;
    r.fisher_ratio_shared = (r.slope * r.slope) / (reference->slope * reference->slope);
    r.fisher_ratio = (r.slope * r.slope / var) /
                     (reference->slope * reference->slope / reference->variance);
  }
  return r;
}

double shift_uncertainty_to_field(double shift_uncertainty, const mwfield::MWField& field) {
  if (!(shift_uncertainty >= 0.0))
    throw Error(Errc::InvalidArgument, "shift uncertainty must be nonnegative");
  field.validate();
  if (field.amplitude == 0.0)
    throw Error(Errc::ZeroDerivative, "shift is stationary at zero field; use the zero-field bound");
  const double d = mwfield::stark_shift_derivative(field);
  if (!(d > 0.0)) throw Error(Errc::ZeroDerivative, "shift derivative vanishes");
  return shift_uncertainty / d;
}

double zero_field_bound(double shift_uncertainty, const mwfield::MWField& field) {
  return mwfield::amplitude_for_shift(shift_uncertainty, field);
}

FieldScan field_scan(const SystemParams& p, const FieldScanConfig& config,
                     std::span<const double> amplitudes) {
  if (amplitudes.size() < 2) throw Error(Errc::InsufficientBins, "field ladder needs >= 2 rungs");
  const auto curve = mwfield::shift_curve(amplitudes, config.mw);
  const double probe = p.frequency(config.probe_detuning).rad_per_s();
  FieldScan out;
  std::vector<double> hold(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out.shift.push_back(curve[i].shift);
    hold[i] = mwfield::shifted_detuning(probe, curve[i].shift);
  }
  const Frequency d0 = rad_s(hold.front()).in(p.unit());
  const auto roots = meanfield::steady_state_roots(p, d0);
  const auto initial = dynamics::stationary_state(p, d0, roots.roots.front().rho,
                                                  config.integrator.convention);
  const auto tr = dynamics::integrate_schedule(p, hold, config.dwell, initial, config.integrator);
  out.rho = tr.bin_mean_rho;
  const auto eps = detector::transmission_map(out.rho, config.map);
  out.scan = detector::analytic_scan("E_mw_V_per_cm", amplitudes, eps, config.detector,
                                     config.dwell);
  return out;
}

namespace {

struct ModelMoments {
  std::vector<double> mean;
  std::vector<double> var;
};

ModelMoments moments_at(const TransmissionModel& model, double theta, const MonteCarloConfig& c) {
  const auto eps = model(theta);
  ModelMoments m;
  m.mean.resize(eps.size());
  m.var.resize(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    m.mean[i] = detector::mean_diff_counts(eps[i], c.detector, c.dwell);
    m.var[i] = detector::variance_diff_counts(eps[i], c.detector, c.dwell);
  }
  return m;
}

double gaussian_fisher(const TransmissionModel& model, double theta, double h,
                       const MonteCarloConfig& c) {
  const auto plus = moments_at(model, theta + h, c);
  const auto minus = moments_at(model, theta - h, c);
  const auto mid = moments_at(model, theta, c);
  double f = 0.0;
  for (std::size_t i = 0; i < mid.mean.size(); ++i) {
    const double dm = (plus.mean[i] - minus.mean[i]) / (2.0 * h);
    const double dv = (plus.var[i] - minus.var[i]) / (2.0 * h);
    f += dm * dm / mid.var[i] + dv * dv / (2.0 * mid.var[i] * mid.var[i]);
  }
  return f;
}

}  // namespace

MonteCarloFisher monte_carlo_fisher(const TransmissionModel& model,
                                    const MonteCarloConfig& config) {
  config.detector.validate();
  if (config.trials < 2) throw Error(Errc::InvalidArgument, "need at least 2 trials");
  if (config.grid_points < 5) throw Error(Errc::InvalidArgument, "need at least 5 grid points");

  double h = config.derivative_step > 0.0 ? config.derivative_step : 1e-3 * (1.0 + std::abs(config.theta));
  double f = gaussian_fisher(model, config.theta, h, config);
  if (!(f > 0.0)) throw Error(Errc::NonpositiveFisher, "model carries no information");
  if (config.derivative_step <= 0.0) {
    h = 1e-2 / std::sqrt(f);
    f = gaussian_fisher(model, config.theta, h, config);
    if (!(f > 0.0)) throw Error(Errc::NonpositiveFisher, "model carries no information");
  }
  const double sigma = 1.0 / std::sqrt(f);

  kernels::ShiftLikelihoodTable table;
  const int g = config.grid_points;
  for (int j = 0; j < g; ++j) {
    const double th = config.theta + config.grid_sigmas * sigma * (2.0 * j / (g - 1) - 1.0);
    table.shifts.push_back(th);
    auto m = moments_at(model, th, config);
    table.means.push_back(std::move(m.mean));
    table.variances.push_back(std::move(m.var));
  }
  const auto truth_eps = model(config.theta);
  const double r = config.detector.detected_rate();
  for (double e : truth_eps)
    table.truth.push_back({r * (1.0 + e) * config.dwell, r * config.dwell,
                           config.detector.electronic_noise_var * config.dwell});

  const auto est = config.parallel
                       ? kernels::ml_shift_estimates_omp(table, config.model, config.trials,
                                                         config.detector.seed)
                       : kernels::ml_shift_estimates_serial(table, config.model, config.trials,
                                                            config.detector.seed);
  MonteCarloFisher mc;
  mc.trials = config.trials;
  mc.analytic_fisher = f;
  mc.cramer_rao = cramer_rao(f);
  double mean = 0.0;
  for (double e : est) mean += e;
  mean /= static_cast<double>(est.size());
  double ss = 0.0;
  for (double e : est) ss += (e - mean) * (e - mean);
  mc.estimator_mean = mean;
  mc.estimator_variance = ss / static_cast<double>(est.size() - 1);
  mc.empirical_fisher = 1.0 / mc.estimator_variance;
  mc.variance_rel_stderr = std::sqrt(2.0 / static_cast<double>(est.size() - 1));
  return mc;
}

void write_csv(const FisherCurve& curve, std::ostream& os) {
  csv::Writer w(os);
  w.header({curve.axis_label.empty() ? std::string("axis") : curve.axis_label, "fisher", "slope",
            "slope_stderr", "variance", "variance_term"});
  for (std::size_t i = 0; i < curve.axis.size(); ++i) {
    w.field(curve.axis[i]).field(curve.fisher[i]).field(curve.slope[i]);
    w.field(curve.slope_stderr[i]).field(curve.variance[i]).field(curve.variance_term[i]);
    w.end_row();
  }
}

nlohmann::ordered_json to_json(const FisherCurve& curve) {
  nlohmann::ordered_json j;
  j["axis_label"] = curve.axis_label;
  j["window_half_width"] = curve.window;
  j["variance_source"] = curve.source == VarianceSource::Analytic ? "analytic" : "empirical";
  j["include_variance_term"] = curve.include_variance_term;
  if (!curve.fisher.empty()) {
    const auto i = curve.argmax();
    j["fisher_max"] = curve.fisher[i];
    j["axis_at_max"] = curve.axis[i];
    j["cramer_rao_at_max"] = curve.fisher[i] > 0.0 ? cramer_rao(curve.fisher[i]) : INFINITY;
  }
  return j;
}

nlohmann::ordered_json to_json(const SensitivityReport& r) {
  nlohmann::ordered_json j;
  j["slope"] = r.slope;
  j["slope_stderr"] = r.slope_stderr;
  j["offset"] = r.offset;
  j["variance"] = r.variance;
  j["flat"] = r.flat;
  j["field_error"] = r.flat ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.field_error);
  j["dwell_s"] = r.dwell;
  j["sensitivity"] = r.flat ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.sensitivity);
  if (r.slope_ratio) j["slope_ratio"] = *r.slope_ratio;
  if (r.fisher_ratio) j["fisher_ratio"] = *r.fisher_ratio;
  if (r.fisher_ratio_shared) j["fisher_ratio_shared_variance"] = *r.fisher_ratio_shared;
  return j;
}

nlohmann::ordered_json to_json(const DwellLadder& ladder) {
  nlohmann::ordered_json j;
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : ladder.points)
    pts.push_back({{"dwell_s", p.dwell}, {"fisher_max", p.fisher_max}, {"axis_at_max", p.axis_at_max}});
  j["fit"] = fits::to_json(ladder.fit);
  return j;
}

nlohmann::ordered_json to_json(const MonteCarloFisher& mc) {
  nlohmann::ordered_json j;
  j["trials"] = mc.trials;
  j["analytic_fisher"] = mc.analytic_fisher;
  j["cramer_rao"] = mc.cramer_rao;
  j["estimator_mean"] = mc.estimator_mean;
  j["estimator_variance"] = mc.estimator_variance;
  j["empirical_fisher"] = mc.empirical_fisher;
  j["variance_rel_stderr"] = mc.variance_rel_stderr;
  return j;
}

}  // namespace rydcrit::metrology
