#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace rydcrit::detector {

// Photon energy of the 795 nm probe, J.
double photon_energy(double wavelength_m);
inline const double kProbeWavelength = 795e-9;

struct DetectorParams {
  double photon_flux = 1e14;          // mu0, photons/s per beam
  double path_transmission = 0.206;   // zeta
  double efficiency = 1.0;            // eta
  double conversion = 5.3e7;          // G, V/W
  double responsivity_scale = 1.0;    // calibration multiplier on G
  double electronic_noise_var = 0.0;  // additive variance per second, counts^2/s
  std::uint64_t seed = 1;

  // zeta * eta * mu0: detected difference-signal rate per unit transmission.
  double detected_rate() const { return path_transmission * efficiency * photon_flux; }
  void validate() const;
};

enum class VarianceForm { Full, Approximate };

// mu = zeta eta mu0 eps t
double mean_diff_counts(double epsilon, const DetectorParams& det, double dwell);
// Var = 2 zeta eta mu0 t + zeta eta mu0 eps t (Full), or 2 zeta eta mu0 t (Approximate),
// plus the electronic floor.
double variance_diff_counts(double epsilon, const DetectorParams& det, double dwell,
                            VarianceForm form = VarianceForm::Full);

struct TransmissionMap {
  double offset = 0.0;  // c0
  double slope = 1.0;   // c1
  double max = 1.0;     // clamp
};

// eps = c0 + c1 rho, clamped to [0, max]. BadCalibration if c1 <= 0.
double transmission_map(double rho, const TransmissionMap& map);
std::vector<double> transmission_map(std::span<const double> rho, const TransmissionMap& map);

double counts_to_voltage(double counts, const DetectorParams& det, double dwell,
                         double photon_energy_j);
// Responsivity multiplier that maps `rate` photons/s onto `volts`.
double calibrate_responsivity(double volts, double rate, const DetectorParams& det,
                              double photon_energy_j);

enum class CountModel { Poisson, Gaussian };
enum class Provenance { Analytic, Sampled };

CountModel parse_count_model(const std::string& name);
std::string to_string(CountModel model);
std::string to_string(Provenance provenance);

struct CountBin {
  double axis = 0.0;
  double dwell = 0.0;
  double epsilon = 0.0;
  double mean_counts = 0.0;  // analytic mean, or sample mean when sampled
  double variance = 0.0;     // analytic shot-noise (+floor) variance
  std::vector<double> samples;

  double empirical_variance() const;
};

struct CountScan {
  std::string axis_label;  // e.g. "delta_2pi_MHz"
  std::vector<CountBin> bins;
  Provenance provenance = Provenance::Analytic;
  CountModel model = CountModel::Gaussian;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  DetectorParams detector;

  std::vector<double> axis() const;
  std::vector<double> means() const;
};

CountScan analytic_scan(std::string axis_label, std::span<const double> axis,
                        std::span<const double> epsilon, const DetectorParams& det, double dwell);

// Independent per-bin draws of (probe - reference) counts. Bin i of stream s
// always uses substream (s, i) of det.seed.
CountScan sample_scan(std::string axis_label, std::span<const double> axis,
                      std::span<const double> epsilon, const DetectorParams& det, double dwell,
                      CountModel model, int samples_per_bin = 1, std::uint64_t stream = 0);

void write_csv(const CountScan& scan, std::ostream& os);
nlohmann::ordered_json to_json(const CountScan& scan);
nlohmann::ordered_json to_json(const DetectorParams& det);

}  // namespace rydcrit::detector
