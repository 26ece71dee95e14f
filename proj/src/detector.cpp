#include "rydcrit/detector.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rydcrit/csv.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/kernels.hpp"
#include "rydcrit/rng.hpp"

namespace rydcrit::detector {

namespace {

constexpr double kPlanck = 6.62607015e-34;
constexpr double kLightSpeed = 299792458.0;

void require_dwell(double dwell) {
  if (!(dwell > 0.0) || !std::isfinite(dwell))
    throw Error(Errc::InvalidArgument, "dwell must be positive");
}

}  // namespace

double photon_energy(double wavelength_m) {
  if (!(wavelength_m > 0.0)) throw Error(Errc::InvalidArgument, "wavelength must be positive");
  return kPlanck * kLightSpeed / wavelength_m;
}

void DetectorParams::validate() const {
  if (!(photon_flux > 0.0) || !std::isfinite(photon_flux))
    throw Error(Errc::InvalidArgument, "photon_flux must be positive");
  if (!(path_transmission > 0.0 && path_transmission <= 1.0))
    throw Error(Errc::InvalidArgument, "path_transmission must lie in (0, 1]");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw Error(Errc::InvalidArgument, "efficiency must lie in (0, 1]");
  if (!(conversion > 0.0)) throw Error(Errc::InvalidArgument, "conversion must be positive");
  if (!(responsivity_scale > 0.0))
    throw Error(Errc::InvalidArgument, "responsivity_scale must be positive");
  if (!(electronic_noise_var >= 0.0))
    throw Error(Errc::InvalidArgument, "electronic_noise_var must be nonnegative");
}

double mean_diff_counts(double epsilon, const DetectorParams& det, double dwell) {
  require_dwell(dwell);
  if (!(epsilon >= 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be nonnegative");
  return det.detected_rate() * epsilon * dwell;
}

double variance_diff_counts(double epsilon, const DetectorParams& det, double dwell,
                            VarianceForm form) {
  require_dwell(dwell);
  if (!(epsilon >= 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be nonnegative");
  const double r = det.detected_rate();
  double var = 2.0 * r * dwell;
  if (form == VarianceForm::Full) var += r * epsilon * dwell;
  return var + det.electronic_noise_var * dwell;
}

double transmission_map(double rho, const TransmissionMap& map) {
  if (!(map.slope > 0.0)) throw Error(Errc::BadCalibration, "transmission slope must be positive");
  if (!(map.max > 0.0)) throw Error(Errc::BadCalibration, "transmission max must be positive");
  return std::clamp(map.offset + map.slope * rho, 0.0, map.max);
}

std::vector<double> transmission_map(std::span<const double> rho, const TransmissionMap& map) {
  std::vector<double> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = transmission_map(rho[i], map);
  return out;
}

double counts_to_voltage(double counts, const DetectorParams& det, double dwell,
                         double photon_energy_j) {
  require_dwell(dwell);
  return det.conversion * det.responsivity_scale * counts * photon_energy_j / dwell;
}

double calibrate_responsivity(double volts, double rate, const DetectorParams& det,
                              double photon_energy_j) {
  if (!(volts > 0.0) || !(rate > 0.0) || !(photon_energy_j > 0.0))
    throw Error(Errc::BadCalibration, "responsivity calibration needs positive inputs");
  return volts / (det.conversion * rate * photon_energy_j);
}

CountModel parse_count_model(const std::string& name) {
  if (name == "poisson") return CountModel::Poisson;
  if (name == "gaussian") return CountModel::Gaussian;
  throw Error(Errc::InvalidArgument, "unknown count model '" + name + "'");
}

std::string to_string(CountModel model) {
  return model == CountModel::Poisson ? "poisson" : "gaussian";
}

std::string to_string(Provenance provenance) {
  return provenance == Provenance::Analytic ? "analytic" : "sampled";
}

double CountBin::empirical_variance() const {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(n - 1);
}

std::vector<double> CountScan::axis() const {
  std::vector<double> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.push_back(b.axis);
  return out;
}

std::vector<double> CountScan::means() const {
  std::vector<double> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.push_back(b.mean_counts);
  return out;
}

CountScan analytic_scan(std::string axis_label, std::span<const double> axis,
                        std::span<const double> epsilon, const DetectorParams& det, double dwell) {
  det.validate();
  if (axis.size() != epsilon.size())
    throw Error(Errc::InvalidArgument, "axis and epsilon sizes differ");
  CountScan scan;
  scan.axis_label = std::move(axis_label);
  scan.detector = det;
  scan.provenance = Provenance::Analytic;
  scan.bins.reserve(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    CountBin b;
    b.axis = axis[i];
    b.dwell = dwell;
    b.epsilon = epsilon[i];
    b.mean_counts = mean_diff_counts(epsilon[i], det, dwell);
    b.variance = variance_diff_counts(epsilon[i], det, dwell);
    scan.bins.push_back(std::move(b));
  }
  return scan;
}

CountScan sample_scan(std::string axis_label, std::span<const double> axis,
                      std::span<const double> epsilon, const DetectorParams& det, double dwell,
                      CountModel model, int samples_per_bin, std::uint64_t stream) {
  if (samples_per_bin < 1) throw Error(Errc::InvalidArgument, "samples_per_bin must be >= 1");
  CountScan scan = analytic_scan(std::move(axis_label), axis, epsilon, det, dwell);
  scan.provenance = Provenance::Sampled;
  scan.model = model;
  scan.seed = det.seed;
  scan.stream = stream;

  const double r = det.detected_rate();
  std::vector<kernels::BeamMoments> moments(scan.bins.size());
  for (std::size_t i = 0; i < moments.size(); ++i) {
    // Reference beam sees the baseline; the probe carries the extra transmission.
    moments[i].reference_mean = r * dwell;
    moments[i].probe_mean = r * (1.0 + epsilon[i]) * dwell;
    moments[i].floor_variance = det.electronic_noise_var * dwell;
  }
  auto draws = kernels::sample_difference_omp(moments, model, samples_per_bin, det.seed, stream);
  for (std::size_t i = 0; i < scan.bins.size(); ++i) {
    auto& b = scan.bins[i];
    b.samples = std::move(draws[i]);
    double m = 0.0;
    for (double x : b.samples) m += x;
    b.mean_counts = m / static_cast<double>(b.samples.size());
  }
  return scan;
}

void write_csv(const CountScan& scan, std::ostream& os) {
  csv::Writer w(os);
  w.header({scan.axis_label.empty() ? std::string("bin_center") : scan.axis_label, "dwell_s",
            "epsilon", "mean_counts", "variance", "n_samples"});
  for (const auto& b : scan.bins) {
    w.field(b.axis).field(b.dwell).field(b.epsilon).field(b.mean_counts).field(b.variance);
    w.field(static_cast<long long>(b.samples.size()));
    w.end_row();
  }
}

nlohmann::ordered_json to_json(const DetectorParams& det) {
  nlohmann::ordered_json j;
  j["photon_flux_per_s"] = det.photon_flux;
  j["path_transmission"] = det.path_transmission;
  j["efficiency"] = det.efficiency;
  j["conversion_v_per_w"] = det.conversion;
  j["responsivity_scale"] = det.responsivity_scale;
  j["electronic_noise_var_per_s"] = det.electronic_noise_var;
  j["seed"] = det.seed;
  return j;
}

nlohmann::ordered_json to_json(const CountScan& scan) {
  nlohmann::ordered_json j;
  j["axis_label"] = scan.axis_label;
  j["provenance"] = to_string(scan.provenance);
  if (scan.provenance == Provenance::Sampled) {
    j["count_model"] = to_string(scan.model);
    j["seed"] = scan.seed;
    j["stream"] = scan.stream;
    j["poisson_gaussian_switch"] = rng::kPoissonGaussianSwitch;
  }
  j["detector"] = to_json(scan.detector);
  auto& bins = j["bins"] = nlohmann::ordered_json::array();
  for (const auto& b : scan.bins) {
    nlohmann::ordered_json e;
    e["axis"] = b.axis;
    e["dwell_s"] = b.dwell;
    e["epsilon"] = b.epsilon;
    e["mean_counts"] = b.mean_counts;
    e["variance"] = b.variance;
    e["n_samples"] = b.samples.size();
    bins.push_back(std::move(e));
  }
  return j;
}

}  // namespace rydcrit::detector
