#include "rydcrit/scenario.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rydcrit/error.hpp"

namespace rydcrit::scenario {

namespace pt = boost::property_tree;

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::Spectrum: return "spectrum";
    case Kind::DwellLadder: return "dwell_ladder";
    case Kind::Susceptibility: return "susceptibility";
    case Kind::Stark: return "stark";
    case Kind::FieldResponse: return "field_response";
    case Kind::Hysteresis: return "hysteresis";
  }
  return "unknown";
}

mwfield::MWField MwConfig::field() const {
  mwfield::MWField f;
  f.mw_detuning = mw_detuning_2pi_mhz * kRadPerSecondPerTwoPiMHz;
  f.coupling = mwfield::calibrate_coupling(calibration_amplitude,
                                           calibration_shift_2pi_mhz * kRadPerSecondPerTwoPiMHz,
                                           f.mw_detuning);
  f.frequency_ghz = frequency_ghz;
  return f;
}

std::vector<double> MwConfig::ladder() const {
  std::vector<double> out;
  if (!(amplitude_step > 0.0) || amplitude_end < amplitude_start) return out;
  const auto n = static_cast<long>(std::floor((amplitude_end - amplitude_start) / amplitude_step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(amplitude_start + i * amplitude_step);
  return out;
}

SystemParams Scenario::reference_system() const {
  return reference ? *reference : system.with_interaction(0.0);
}

namespace {

constexpr double kMicro = 1e-6;
constexpr double kMilliVoltPerCm = 1e-3;  // V/cm

class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<std::string>& errors) : tree_(tree), errors_(errors) {}

  bool has_section(const std::string& s) const { return tree_.get_child_optional(s).has_value(); }

  std::optional<std::string> text(const std::string& key, bool required) {
    used_.insert(key);
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) {
      if (required) errors_.push_back(key + ": missing");
      return std::nullopt;
    }
    return trim(*v);
  }

  std::optional<double> number(const std::string& key, bool required) {
    auto s = text(key, required);
    if (!s) return std::nullopt;
    double v = 0.0;
    if (!to_double(*s, v)) {
      errors_.push_back(key + ": '" + *s + "' is not a number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> integer(const std::string& key, bool required) {
    auto s = text(key, required);
    if (!s) return std::nullopt;
    long long v = 0;
    const auto res = std::from_chars(s->data(), s->data() + s->size(), v);
    if (res.ec != std::errc() || res.ptr != s->data() + s->size()) {
      errors_.push_back(key + ": '" + *s + "' is not an integer");
      return std::nullopt;
    }
    return v;
  }

  std::optional<bool> boolean(const std::string& key) {
    auto s = text(key, false);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    errors_.push_back(key + ": '" + *s + "' is not a boolean");
    return std::nullopt;
  }

  std::vector<double> list(const std::string& key, bool required) {
    std::vector<double> out;
    auto s = text(key, required);
    if (!s) return out;
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      if (!to_double(trim(item), v)) {
        errors_.push_back(key + ": '" + trim(item) + "' is not a number");
        return {};
      }
      out.push_back(v);
    }
    if (out.empty() && required) errors_.push_back(key + ": empty list");
    return out;
  }

  void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) errors_.push_back(key + ": " + message);
  }

  void report_unknown() {
    for (const auto& [section, child] : tree_) {
      if (child.empty()) {
        errors_.push_back(section + ": key outside any section");
        continue;
      }
      for (const auto& [key, value] : child) {
        const std::string full = section + "." + key;
        if (!used_.count(full)) errors_.push_back(full + ": unknown key");
      }
    }
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static bool to_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(v);
  }

  const pt::ptree& tree_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

std::optional<Kind> parse_kind(const std::string& s) {
  for (Kind k : {Kind::Spectrum, Kind::DwellLadder, Kind::Susceptibility, Kind::Stark,
                 Kind::FieldResponse, Kind::Hysteresis})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::optional<SystemParams> read_system(Reader& r, const std::string& sec, bool required) {
  if (!required && !r.has_section(sec)) return std::nullopt;
  const auto rabi = r.number(sec + ".rabi_2pi_mhz", true);
  const auto gamma = r.number(sec + ".gamma_2pi_mhz", true);
  const auto v = r.number(sec + ".interaction_2pi_mhz", true);
  const auto label = r.text(sec + ".label", false);
  bool ok = rabi && gamma && v;
  if (rabi) {
    r.require(*rabi >= 0.0, sec + ".rabi_2pi_mhz", "must be >= 0");
    ok = ok && *rabi >= 0.0;
  }
  if (gamma) {
    r.require(*gamma > 0.0, sec + ".gamma_2pi_mhz", "must be > 0");
    ok = ok && *gamma > 0.0;
  }
  if (!ok) return std::nullopt;
  return SystemParams::from_2pi_mhz(*rabi, *gamma, *v, label.value_or(""));
}

std::optional<dynamics::SweepProtocol> read_sweep(Reader& r, bool required, bool need_dwell) {
  if (!required && !r.has_section("sweep")) return std::nullopt;
  const auto start = r.number("sweep.delta_start_2pi_mhz", true);
  const auto end = r.number("sweep.delta_end_2pi_mhz", true);
  const auto bins = r.integer("sweep.bins", true);
  const auto dwell = r.number("sweep.dwell_us", need_dwell);
  const auto rate = r.number("sweep.rate_2pi_mhz_per_us", false);
  const auto mode = r.text("sweep.mode", false);
  bool ok = start && end && bins && (dwell || !need_dwell);
  if (start && end) {
    r.require(*start != *end, "sweep.delta_end_2pi_mhz", "must differ from delta_start");
    ok = ok && *start != *end;
  }
  if (bins) {
    r.require(*bins >= 2, "sweep.bins", "must be >= 2");
    ok = ok && *bins >= 2;
  }
  if (dwell) {
    r.require(*dwell > 0.0, "sweep.dwell_us", "must be > 0");
    ok = ok && *dwell > 0.0;
  }
  dynamics::SweepMode m = dynamics::SweepMode::Ramp;
  if (mode) {
    if (*mode == "stepwise") {
      m = dynamics::SweepMode::Stepwise;
    } else if (*mode != "ramp") {
      r.require(false, "sweep.mode", "must be 'ramp' or 'stepwise'");
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  const double dw = dwell.value_or(1.0) * kMicro;
  auto pr = dynamics::SweepProtocol::from_bins(mhz2pi(*start), mhz2pi(*end),
                                               static_cast<int>(*bins), dw, m);
  if (rate && dwell) {
    const double given = *rate * kRadPerSecondPerTwoPiMHz / kMicro;
    if (!(std::abs(given - pr.rate) <= 1e-9 * pr.rate)) {
      r.require(false, "sweep.rate_2pi_mhz_per_us",
                "inconsistent with (delta_end - delta_start) / (bins x dwell)");
      return std::nullopt;
    }
  }
  return pr;
}

void read_detector(Reader& r, Scenario& sc) {
  auto& d = sc.detector;
  if (auto v = r.number("detector.photon_flux_per_s", false)) {
    r.require(*v > 0.0, "detector.photon_flux_per_s", "must be > 0");
    d.photon_flux = *v;
  }
  if (auto v = r.number("detector.path_transmission", false)) {
    r.require(*v > 0.0 && *v <= 1.0, "detector.path_transmission", "must lie in (0, 1]");
    d.path_transmission = *v;
  }
  if (auto v = r.number("detector.efficiency", false)) {
    r.require(*v > 0.0 && *v <= 1.0, "detector.efficiency", "must lie in (0, 1]");
    d.efficiency = *v;
  }
  if (auto v = r.number("detector.conversion_v_per_w", false)) {
    r.require(*v > 0.0, "detector.conversion_v_per_w", "must be > 0");
    d.conversion = *v;
  }
  if (auto v = r.number("detector.responsivity_scale", false)) {
    r.require(*v > 0.0, "detector.responsivity_scale", "must be > 0");
    d.responsivity_scale = *v;
  }
  if (auto v = r.number("detector.electronic_noise_var_per_s", false)) {
    r.require(*v >= 0.0, "detector.electronic_noise_var_per_s", "must be >= 0");
    d.electronic_noise_var = *v;
  }
  if (auto v = r.text("detector.count_model", false)) {
    if (*v == "poisson" || *v == "gaussian")
      sc.count_model = detector::parse_count_model(*v);
    else
      r.require(false, "detector.count_model", "must be 'poisson' or 'gaussian'");
  }
  if (auto v = r.integer("detector.samples_per_bin", false)) {
    r.require(*v >= 1, "detector.samples_per_bin", "must be >= 1");
    sc.samples_per_bin = static_cast<int>(std::max(1LL, *v));
  }
  if (auto v = r.number("transmission.offset", false)) sc.map.offset = *v;
  if (auto v = r.number("transmission.slope", false)) {
    r.require(*v > 0.0, "transmission.slope", "must be > 0");
    sc.map.slope = *v;
  }
  if (auto v = r.number("transmission.max", false)) {
    r.require(*v > 0.0, "transmission.max", "must be > 0");
    sc.map.max = *v;
  }
}

std::optional<MwConfig> read_mw(Reader& r, bool required) {
  if (!required && !r.has_section("mw")) return std::nullopt;
  MwConfig m;
  bool ok = true;
  if (auto v = r.number("mw.detuning_2pi_mhz", true)) {
    r.require(*v >= 0.0, "mw.detuning_2pi_mhz", "must be >= 0");
    m.mw_detuning_2pi_mhz = *v;
  } else {
    ok = false;
  }
  if (auto v = r.number("mw.calibration_amplitude_mv_per_cm", true)) {
    r.require(*v > 0.0, "mw.calibration_amplitude_mv_per_cm", "must be > 0");
    ok = ok && *v > 0.0;
    m.calibration_amplitude = *v * kMilliVoltPerCm;
  } else {
    ok = false;
  }
  if (auto v = r.number("mw.calibration_shift_2pi_mhz", true)) {
    r.require(*v > 0.0, "mw.calibration_shift_2pi_mhz", "must be > 0");
    ok = ok && *v > 0.0;
    m.calibration_shift_2pi_mhz = *v;
  } else {
    ok = false;
  }
  if (auto v = r.number("mw.frequency_ghz", false)) m.frequency_ghz = *v;
  if (auto v = r.number("mw.amplitude_start_mv_per_cm", false)) {
    r.require(*v >= 0.0, "mw.amplitude_start_mv_per_cm", "must be >= 0");
    m.amplitude_start = *v * kMilliVoltPerCm;
  }
  if (auto v = r.number("mw.amplitude_end_mv_per_cm", false)) m.amplitude_end = *v * kMilliVoltPerCm;
  if (auto v = r.number("mw.amplitude_step_mv_per_cm", false)) {
    r.require(*v > 0.0, "mw.amplitude_step_mv_per_cm", "must be > 0");
    m.amplitude_step = *v * kMilliVoltPerCm;
  }
  if (m.amplitude_step > 0.0)
    r.require(m.amplitude_end > m.amplitude_start, "mw.amplitude_end_mv_per_cm",
              "must exceed amplitude_start");
  if (!ok) return std::nullopt;
  return m;
}

void require_inside(Reader& r, const std::string& key, std::optional<double> v, double lo,
                    double hi) {
  if (v) r.require(*v >= std::min(lo, hi) && *v <= std::max(lo, hi), key,
                   "lies outside the scanned range");
}

}  // namespace

Scenario parse(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(Errc::Validation, source + ": " + e.message() + " (line " +
                                      std::to_string(e.line()) + ")");
  }
  std::vector<std::string> errors;
  Reader r(tree, errors);
  Scenario sc;
  sc.source = source;

  sc.name = r.text("scenario.name", true).value_or("");
  if (!sc.name.empty())
    r.require(sc.name.find_first_of("/\\ ") == std::string::npos && sc.name != "." && sc.name != "..",
              "scenario.name", "must be a plain file name");
  sc.description = r.text("scenario.description", false).value_or("");
  if (auto k = r.text("scenario.kind", true)) {
    if (auto kind = parse_kind(*k))
      sc.kind = *kind;
    else
      r.require(false, "scenario.kind", "unknown kind '" + *k + "'");
  }
  if (auto s = r.integer("scenario.seed", false)) {
    r.require(*s >= 0, "scenario.seed", "must be >= 0");
    sc.detector.seed = static_cast<std::uint64_t>(*s);
  }

  const auto sys = read_system(r, "system", true);
  if (sys) sc.system = *sys;
  sc.reference = read_system(r, "reference", false);
  if (sc.reference) {
    if (!(sc.reference->gamma() == sc.system.gamma()) &&
        sc.kind != Kind::FieldResponse)
      r.require(false, "reference.gamma_2pi_mhz", "must equal system.gamma_2pi_mhz");
  }

  const bool need_sweep = sc.kind != Kind::FieldResponse;
  const bool need_dwell = sc.kind != Kind::DwellLadder && sc.kind != Kind::Stark;
  sc.protocol = read_sweep(r, need_sweep, need_dwell);
  read_detector(r, sc);
  sc.mw = read_mw(r, sc.kind == Kind::Stark || sc.kind == Kind::FieldResponse);

  auto& a = sc.analysis;
  if (auto v = r.integer("analysis.window", false)) {
    r.require(*v >= 2, "analysis.window", "must be >= 2");
    a.window = static_cast<int>(*v);
  }
  if (auto v = r.integer("analysis.reference_window", false)) {
    r.require(*v >= 2, "analysis.reference_window", "must be >= 2");
    a.reference_window = static_cast<int>(*v);
    if (sc.protocol)
      r.require(sc.protocol->bins >= 2 * *v + 1, "analysis.reference_window",
                "needs at least 2 x window + 1 sweep bins");
  }
  const double lo = sc.protocol ? sc.protocol->delta_start.value : 0.0;
  const double hi = sc.protocol ? sc.protocol->delta_end.value : 0.0;
  if (sc.protocol)
    r.require(sc.protocol->bins >= 2 * a.window + 1, "analysis.window",
              "needs at least 2 x window + 1 sweep bins");

  switch (sc.kind) {
    case Kind::Spectrum:
      if (auto v = r.number("analysis.repetitions", false)) {
        r.require(*v >= 1.0, "analysis.repetitions", "must be >= 1");
        a.repetitions = *v;
      }
      break;
    case Kind::DwellLadder: {
      const auto d = r.list("analysis.dwells_us", true);
      for (double v : d) r.require(v > 0.0, "analysis.dwells_us", "entries must be > 0");
      r.require(d.empty() || d.size() >= 3, "analysis.dwells_us", "needs at least 3 entries");
      for (double v : d) a.dwells.push_back(v * kMicro);
      if (auto v = r.number("analysis.t0_us", false)) {
        r.require(*v > 0.0, "analysis.t0_us", "must be > 0");
        a.t0 = *v * kMicro;
      }
      break;
    }
    case Kind::Susceptibility: {
      a.fit_lo = r.number("analysis.fit_lo_2pi_mhz", true);
      a.fit_hi = r.number("analysis.fit_hi_2pi_mhz", true);
      require_inside(r, "analysis.fit_lo_2pi_mhz", a.fit_lo, lo, hi);
      require_inside(r, "analysis.fit_hi_2pi_mhz", a.fit_hi, lo, hi);
      if (a.fit_lo && a.fit_hi)
        r.require(*a.fit_hi > *a.fit_lo, "analysis.fit_hi_2pi_mhz", "must exceed fit_lo");
      if (auto v = r.number("analysis.delta0_2pi_mhz", false)) {
        r.require(*v > 0.0, "analysis.delta0_2pi_mhz", "must be > 0");
        a.delta0_2pi_mhz = *v;
      }
      break;
    }
    case Kind::Stark: {
      const auto e = r.list("analysis.amplitudes_mv_per_cm", true);
      for (double v : e) {
        r.require(v >= 0.0, "analysis.amplitudes_mv_per_cm", "entries must be >= 0");
        a.amplitudes.push_back(v * kMilliVoltPerCm);
      }
      r.require(std::is_sorted(a.amplitudes.begin(), a.amplitudes.end()),
                "analysis.amplitudes_mv_per_cm", "must be ascending");
      if (auto v = r.number("analysis.operating_amplitude_mv_per_cm", true)) {
        r.require(*v > 0.0, "analysis.operating_amplitude_mv_per_cm", "must be > 0");
        a.operating_amplitude = *v * kMilliVoltPerCm;
      }
      if (auto v = r.number("analysis.shift_uncertainty_2pi_mhz", true)) {
        r.require(*v > 0.0, "analysis.shift_uncertainty_2pi_mhz", "must be > 0");
        a.shift_uncertainty_2pi_mhz = *v;
      }
      if (sc.mw)
        r.require(sc.mw->amplitude_step > 0.0, "mw.amplitude_step_mv_per_cm",
                  "required for the shift ladder");
      break;
    }
    case Kind::FieldResponse: {
      if (auto v = r.number("analysis.threshold_amplitude_mv_per_cm", true)) {
        r.require(*v >= 0.0, "analysis.threshold_amplitude_mv_per_cm", "must be >= 0");
        a.threshold_amplitude = *v * kMilliVoltPerCm;
      }
      if (auto v = r.number("analysis.dwell_us", true)) {
        r.require(*v > 0.0, "analysis.dwell_us", "must be > 0");
        a.field_dwell = *v * kMicro;
      }
      auto mv = [&](const std::string& key) -> std::optional<double> {
        auto v = r.number(key, true);
        if (v) return *v * kMilliVoltPerCm;
        return std::nullopt;
      };
      a.fit_lo = mv("analysis.fit_lo_mv_per_cm");
      a.fit_hi = mv("analysis.fit_hi_mv_per_cm");
      a.reference_fit_lo = mv("analysis.reference_fit_lo_mv_per_cm");
      a.reference_fit_hi = mv("analysis.reference_fit_hi_mv_per_cm");
      if (auto v = r.number("analysis.target_error_uv_per_cm", false)) a.target_error = *v * 1e-6;
      if (auto v = r.number("analysis.target_dwell_us", false)) a.target_dwell = *v * kMicro;
      if (sc.mw) {
        r.require(sc.mw->amplitude_step > 0.0, "mw.amplitude_step_mv_per_cm",
                  "required for the field ladder");
        const double elo = sc.mw->amplitude_start, ehi = sc.mw->amplitude_end;
        require_inside(r, "analysis.fit_lo_mv_per_cm", a.fit_lo, elo, ehi);
        require_inside(r, "analysis.fit_hi_mv_per_cm", a.fit_hi, elo, ehi);
        require_inside(r, "analysis.reference_fit_lo_mv_per_cm", a.reference_fit_lo, elo, ehi);
        require_inside(r, "analysis.reference_fit_hi_mv_per_cm", a.reference_fit_hi, elo, ehi);
        require_inside(r, "analysis.threshold_amplitude_mv_per_cm",
                       a.threshold_amplitude > 0.0 ? std::optional<double>(a.threshold_amplitude)
                                                   : std::nullopt,
                       elo, ehi);
      }
      if (a.fit_lo && a.fit_hi)
        r.require(*a.fit_hi > *a.fit_lo, "analysis.fit_hi_mv_per_cm", "must exceed fit_lo");
      if (a.reference_fit_lo && a.reference_fit_hi)
        r.require(*a.reference_fit_hi > *a.reference_fit_lo, "analysis.reference_fit_hi_mv_per_cm",
                  "must exceed reference_fit_lo");
      if (sys)
        r.require(sys->interaction() != 0.0, "system.interaction_2pi_mhz",
                  "the many-body system must be interacting");
      break;
    }
    case Kind::Hysteresis: {
      a.interactions = r.list("analysis.interactions_2pi_mhz", true);
      if (auto v = r.number("analysis.area_threshold_2pi_mhz", false)) {
        r.require(*v >= 0.0, "analysis.area_threshold_2pi_mhz", "must be >= 0");
        a.area_threshold = *v;
      }
      break;
    }
  }

  if (auto v = r.boolean("outputs.csv")) sc.outputs.csv = *v;
  if (auto v = r.boolean("outputs.json")) sc.outputs.json = *v;
  if (auto v = r.boolean("outputs.svg")) sc.outputs.svg = *v;

  r.report_unknown();
  if (!errors.empty()) {
    std::string msg = source + ": " + std::to_string(errors.size()) + " validation error(s)";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(Errc::Validation, msg);
  }
  return sc;
}

Scenario load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Validation, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::vector<BundledEntry> bundled(const std::string& directory) {
  namespace fs = std::filesystem;
  std::vector<BundledEntry> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(directory, ec)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".ini") continue;
    const auto sc = load(entry.path().string());
    out.push_back({sc.name, sc.description, entry.path().string()});
  }
  std::sort(out.begin(), out.end(),
            [](const BundledEntry& a, const BundledEntry& b) { return a.name < b.name; });
  return out;
}

std::string resolve(const std::string& arg, const std::string& directory) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(arg)) return arg;
  const fs::path candidate = fs::path(directory) / (arg + ".ini");
  if (arg.find('/') == std::string::npos && fs::is_regular_file(candidate))
    return candidate.string();
  throw Error(Errc::Validation, "no config file or bundled scenario named '" + arg + "'");
}

}  // namespace rydcrit::scenario
