#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rydcrit/detector.hpp"
#include "rydcrit/dynamics.hpp"
#include "rydcrit/mwfield.hpp"
#include "rydcrit/system_params.hpp"

namespace rydcrit::scenario {

enum class Kind { Spectrum, DwellLadder, Susceptibility, Stark, FieldResponse, Hysteresis };

std::string to_string(Kind kind);

struct MwConfig {
  double mw_detuning_2pi_mhz = 50.0;
  double calibration_amplitude = 3.8e-3;  // V/cm
  double calibration_shift_2pi_mhz = 1.2;
  double frequency_ghz = 0.0;
  // Ladder in V/cm.
  double amplitude_start = 0.0;
  double amplitude_end = 0.0;
  double amplitude_step = 0.0;

  mwfield::MWField field() const;  // calibrated, zero amplitude
  std::vector<double> ladder() const;
};

struct Analysis {
  int window = 2;
  std::optional<int> reference_window;  // half-width for the reference system; defaults to window
  double repetitions = 1.0;    // independent scans averaged into one estimate
  std::vector<double> dwells;  // s
  double t0 = 1e-6;
  std::optional<double> fit_lo;  // 2pi MHz, or V/cm for field regions
  std::optional<double> fit_hi;
  std::optional<double> reference_fit_lo;
  std::optional<double> reference_fit_hi;
  double delta0_2pi_mhz = 1.0;
  std::vector<double> amplitudes;  // V/cm, for stark spectra
  double operating_amplitude = 0.0;
  double shift_uncertainty_2pi_mhz = 0.0;
  double threshold_amplitude = 0.0;  // V/cm; many-body operating point sits this far below the fold
  double field_dwell = 5e-6;         // s
  double target_error = 0.0;         // V/cm, for the sensitivity identity
  double target_dwell = 0.0;         // s
  std::vector<double> interactions;  // 2pi MHz ladder
  double area_threshold = 0.0;       // 2pi MHz
};

struct Outputs {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

struct Scenario {
  std::string name;
  std::string description;
  Kind kind = Kind::Spectrum;
  std::string source;  // config path
  SystemParams system = SystemParams::from_2pi_mhz(1.0, 1.0, 0.0);
  std::optional<SystemParams> reference;
  std::optional<dynamics::SweepProtocol> protocol;
  detector::DetectorParams detector;
  detector::CountModel count_model = detector::CountModel::Gaussian;
  int samples_per_bin = 1;
  detector::TransmissionMap map;
  std::optional<MwConfig> mw;
  Analysis analysis;
  Outputs outputs;

  // Reference system, defaulting to the main system with V = 0.
  SystemParams reference_system() const;
};

// Loads and validates; throws Errc::Validation listing every violation.
Scenario load(const std::string& path);
Scenario parse(const std::string& text, const std::string& source);

struct BundledEntry {
  std::string name;
  std::string description;
  std::string path;
};

// Bundled scenario files, sorted by name.
std::vector<BundledEntry> bundled(const std::string& directory = RYDCRIT_SCENARIO_DIR);

// Path of a config argument: an existing file, or the name of a bundled scenario.
std::string resolve(const std::string& arg, const std::string& directory = RYDCRIT_SCENARIO_DIR);

}  // namespace rydcrit::scenario
