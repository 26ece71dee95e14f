#include "rydcrit/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "rydcrit/csv.hpp"
#include "rydcrit/detector.hpp"
#include "rydcrit/dynamics.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/fits.hpp"
#include "rydcrit/io.hpp"
#include "rydcrit/meanfield.hpp"
#include "rydcrit/metrology.hpp"
#include "rydcrit/mwfield.hpp"
#include "rydcrit/plot.hpp"

namespace rydcrit::runner {

using nlohmann::ordered_json;
using scenario::Kind;
using scenario::Scenario;

namespace {

constexpr double kMHz = kRadPerSecondPerTwoPiMHz;

class Artifacts {
 public:
  Artifacts(const Scenario& sc, const RunOptions& o)
      : sc_(sc), dir_((std::filesystem::path(o.out_dir) / sc.name).string()) {}

  void csv(const std::string& name, const std::string& content) {
    if (sc_.outputs.csv) write(name, content);
  }

  void json(const std::string& name, ordered_json body) {
    if (!sc_.outputs.json) return;
    write(name, body.dump(2) + "\n");
  }

  void svg(const std::string& name, const std::string& csv_content, plot::Style style) {
    if (!sc_.outputs.svg) return;
    write(name, plot::render_svg(csv::parse(csv_content), style));
  }

  std::vector<std::string> files;

 private:
  void write(const std::string& name, const std::string& content) {
    const auto path = (std::filesystem::path(dir_) / name).string();
    io::write_file_atomic(path, content);
    files.push_back(path);
  }

  const Scenario& sc_;
  std::string dir_;
};

ordered_json system_json(const SystemParams& p) {
  ordered_json j;
  j["rabi_2pi_MHz"] = p.rabi();
  j["gamma_2pi_MHz"] = p.gamma();
  j["interaction_2pi_MHz"] = p.interaction();
  j["label"] = p.label();
  return j;
}

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json criticality_json(const SystemParams& p) {
  const auto c = meanfield::criticality(p);
  ordered_json j;
  j["delta_critical_2pi_MHz"] = c.delta_c.value;
  j["rho_at_max"] = c.rho_at_max;
  j["max_slope_per_2pi_MHz"] = c.max_slope.divergent ? ordered_json(nullptr) : ordered_json(c.max_slope.value);
  j["max_slope_divergent"] = c.max_slope.divergent;
  j["rho_threshold"] = opt(c.rho_threshold);
  j["beta"] = c.beta.beta;
  j["beta_saturated"] = c.beta.saturated;
  j["critical_interaction_2pi_MHz"] = meanfield::critical_interaction(p);
  if (c.bistable_interval)
    j["bistable_interval_2pi_MHz"] = {c.bistable_interval->lo, c.bistable_interval->hi};
  else
    j["bistable_interval_2pi_MHz"] = nullptr;
  return j;
}

ordered_json header(const Scenario& sc) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = sc.name;
  j["kind"] = scenario::to_string(sc.kind);
  j["description"] = sc.description;
  j["seed"] = sc.detector.seed;
  j["system"] = system_json(sc.system);
  return j;
}

std::vector<double> grid_2pi_mhz(const dynamics::SweepProtocol& pr) {
  std::vector<double> g(static_cast<std::size_t>(pr.bins));
  for (int i = 0; i < pr.bins; ++i) g[i] = pr.bin_center(i) / kMHz;
  return g;
}

std::vector<double> rho_of(const std::vector<meanfield::SpectrumPoint>& curve) {
  std::vector<double> out;
  out.reserve(curve.size());
  for (const auto& pt : curve) out.push_back(pt.rho);
  return out;
}

std::string scan_csv(const detector::CountScan& scan) {
  std::ostringstream os;
  detector::write_csv(scan, os);
  return os.str();
}

std::string fisher_csv(const metrology::FisherCurve& c) {
  std::ostringstream os;
  metrology::write_csv(c, os);
  return os.str();
}

// ---------------------------------------------------------------- spectrum

void run_spectrum(const Scenario& sc, Artifacts& art, ordered_json& metrics) {
  const auto& pr = *sc.protocol;
  const auto grid = grid_2pi_mhz(pr);
  const SystemParams free = sc.reference_system();
  const auto up = meanfield::spectrum(sc.system, grid, FreqUnit::TwoPiMHz, meanfield::BranchPolicy::SweepUp);
  const auto down = meanfield::spectrum(sc.system, grid, FreqUnit::TwoPiMHz, meanfield::BranchPolicy::SweepDown);
  const auto lin = meanfield::spectrum(free, grid, FreqUnit::TwoPiMHz, meanfield::BranchPolicy::Lower);

  const auto tr = dynamics::integrate_sweep(sc.system, pr);
  const auto tr_free = dynamics::integrate_sweep(free, pr);
  const auto eps = detector::transmission_map(tr.bin_mean_rho, sc.map);
  const auto eps_free = detector::transmission_map(tr_free.bin_mean_rho, sc.map);
  const double dwell = pr.dwell_per_bin;
  const auto counts = detector::sample_scan("delta_2pi_MHz", grid, eps, sc.detector, dwell,
                                            sc.count_model, sc.samples_per_bin, 0);
  const auto counts_free = detector::sample_scan("delta_2pi_MHz", grid, eps_free, sc.detector, dwell,
                                                 sc.count_model, sc.samples_per_bin, 1);
  const auto f_int = metrology::fisher_curve(detector::analytic_scan("delta_2pi_MHz", grid, eps, sc.detector, dwell),
                                             sc.analysis.window);
  const auto f_free = metrology::fisher_curve(
      detector::analytic_scan("delta_2pi_MHz", grid, eps_free, sc.detector, dwell),
      sc.analysis.reference_window.value_or(sc.analysis.window));

  std::ostringstream os;
  csv::Writer w(os);
  w.header({"delta_2pi_MHz", "rho_sweep_up", "rho_sweep_down", "rho_free", "rho_swept",
            "rho_swept_free", "counts", "counts_free"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w.field(grid[i]).field(up[i].rho).field(down[i].rho).field(lin[i].rho);
    w.field(tr.bin_mean_rho[i]).field(tr_free.bin_mean_rho[i]);
    w.field(counts.bins[i].mean_counts).field(counts_free.bins[i].mean_counts);
    w.end_row();
  }
  const std::string spectrum = os.str();
  art.csv("spectrum.csv", spectrum);
  art.csv("counts.csv", scan_csv(counts));
  art.csv("fisher_interacting.csv", fisher_csv(f_int));
  art.csv("fisher_free.csv", fisher_csv(f_free));
  art.svg("spectrum.svg", spectrum, {sc.name + ": steady-state population", 0, {1, 2, 3, 4}});

  const auto fwhm = meanfield::full_width_half_max(lin);
  metrics["fwhm_free_2pi_MHz"] = opt(fwhm);
  metrics["fisher_max_interacting"] = f_int.max();
  metrics["fisher_max_free"] = f_free.max();
  metrics["fisher_contrast"] = f_int.max() / f_free.max();

  ordered_json j = header(sc);
  j["reference"] = system_json(free);
  j["criticality"] = criticality_json(sc.system);
  j["criticality_free"] = criticality_json(free);
  j["fwhm_free_2pi_MHz"] = opt(fwhm);
  j["fisher_interacting"] = metrology::to_json(f_int);
  j["fisher_free"] = metrology::to_json(f_free);
  j["fisher_contrast"] = f_int.max() / f_free.max();
  j["detuning_bound_2pi_MHz"] = ordered_json{
      {"repetitions", sc.analysis.repetitions},
      {"raw", metrology::cramer_rao(f_int.max())},
      {"adjusted", metrology::cramer_rao(f_int.max(), sc.analysis.repetitions)},
      {"raw_free", metrology::cramer_rao(f_free.max())},
      {"adjusted_free", metrology::cramer_rao(f_free.max(), sc.analysis.repetitions)}};
  j["integrator"] = dynamics::to_json(tr.stats);
  j["counts"] = ordered_json{{"count_model", detector::to_string(sc.count_model)},
                             {"samples_per_bin", sc.samples_per_bin},
                             {"dwell_s", dwell},
                             {"detector", detector::to_json(sc.detector)}};
  art.json("summary.json", std::move(j));
}

// ------------------------------------------------------------ dwell ladder

void run_dwell_ladder(const Scenario& sc, Artifacts& art, ordered_json& metrics, bool parallel) {
  metrology::LadderConfig cfg;
  cfg.protocol = *sc.protocol;
  cfg.detector = sc.detector;
  cfg.map = sc.map;
  cfg.window = sc.analysis.window;
  cfg.t0 = sc.analysis.t0;
  const SystemParams free = sc.reference_system();
  const auto ladder = metrology::dwell_ladder(sc.system, cfg, sc.analysis.dwells, parallel);
  auto cfg_free = cfg;
  cfg_free.window = sc.analysis.reference_window.value_or(sc.analysis.window);
  const auto ladder_free = metrology::dwell_ladder(free, cfg_free, sc.analysis.dwells, parallel);

  std::ostringstream os;
  csv::Writer w(os);
  w.header({"dwell_s", "fisher_interacting", "fisher_free", "delta_at_max_2pi_MHz",
            "delta_at_max_free_2pi_MHz"});
  for (std::size_t i = 0; i < ladder.points.size(); ++i) {
    w.field(ladder.points[i].dwell).field(ladder.points[i].fisher_max);
    w.field(ladder_free.points[i].fisher_max).field(ladder.points[i].axis_at_max);
    w.field(ladder_free.points[i].axis_at_max);
    w.end_row();
  }
  const std::string table = os.str();
  art.csv("ladder.csv", table);
  art.svg("ladder.svg", table, {sc.name + ": peak Fisher information vs dwell", 0, {1, 2}});

  metrics["lambda_interacting"] = ladder.fit.exponent;
  metrics["lambda_free"] = ladder_free.fit.exponent;
  metrics["amplitude_interacting"] = ladder.fit.amplitude;
  metrics["amplitude_free"] = ladder_free.fit.amplitude;

  ordered_json j = header(sc);
  j["reference"] = system_json(free);
  j["window_half_width"] = sc.analysis.window;
  j["reference_window_half_width"] = cfg_free.window;
  j["interacting"] = metrology::to_json(ladder);
  j["free"] = metrology::to_json(ladder_free);
  art.json("fits.json", std::move(j));
}

// ---------------------------------------------------------- susceptibility

void run_susceptibility(const Scenario& sc, Artifacts& art, ordered_json& metrics) {
  const auto& pr = *sc.protocol;
  const auto tr = dynamics::integrate_sweep(sc.system, pr);
  const auto scan = metrology::sweep_scan(tr, sc.detector, sc.map);
  const double lo = *sc.analysis.fit_lo, hi = *sc.analysis.fit_hi;
  const auto w = static_cast<std::size_t>(sc.analysis.window);

  std::vector<double> xs, ys;
  std::ostringstream os;
  csv::Writer out(os);
  out.header({"delta_2pi_MHz", "rho_swept", "slope_counts_per_2pi_MHz", "in_fit"});
  for (std::size_t i = w; i + w < scan.bins.size(); ++i) {
    const auto s = metrology::local_slope_at(scan, i, sc.analysis.window);
    const double x = scan.bins[i].axis;
    const bool used = x >= lo && x <= hi && s.slope > 0.0;
    if (used) {
      xs.push_back(x);
      ys.push_back(s.slope);
    }
    out.field(x).field(tr.bin_mean_rho[i]).field(s.slope).field(static_cast<long long>(used));
    out.end_row();
  }
  fits::SusceptibilityOptions opts;
  opts.delta0 = sc.analysis.delta0_2pi_mhz;
  const auto fit = fits::fit_susceptibility(xs, ys, opts);
  const std::string table = os.str();
  art.csv("susceptibility.csv", table);
  art.svg("susceptibility.svg", table, {sc.name + ": local slope of mean counts", 0, {2}});

  metrics["alpha"] = fit.exponent;
  metrics["center_2pi_MHz"] = fit.center;
  metrics["points"] = xs.size();

  ordered_json j = header(sc);
  j["criticality"] = criticality_json(sc.system);
  j["fit_region_2pi_MHz"] = {lo, hi};
  j["fit_points"] = xs.size();
  j["fit"] = fits::to_json(fit);
  art.json("fit.json", std::move(j));
}

// ------------------------------------------------------------------- stark

void run_stark(const Scenario& sc, Artifacts& art, ordered_json& metrics) {
  const auto base = sc.mw->field();
  const auto ladder = sc.mw->ladder();
  const auto curve = mwfield::shift_curve(ladder, base);

  std::ostringstream os;
  csv::Writer w(os);
  w.header({"E_mw_mV_per_cm", "shift_2pi_MHz", "mw_rabi_2pi_MHz"});
  for (const auto& pt : curve) {
    w.field(pt.amplitude * 1e3).field(pt.shift / kMHz).field(base.with_amplitude(pt.amplitude).rabi() / kMHz);
    w.end_row();
  }
  const std::string shifts = os.str();
  art.csv("stark_shift.csv", shifts);
  art.svg("stark_shift.svg", shifts, {sc.name + ": AC Stark shift", 0, {1}});

  // Spectra with the resonance displaced by each listed amplitude.
  const auto grid = grid_2pi_mhz(*sc.protocol);
  std::vector<std::vector<double>> spectra;
  std::vector<std::string> cols{"delta_2pi_MHz"};
  std::vector<double> peaks;
  for (double e : sc.analysis.amplitudes) {
    const double shift = mwfield::stark_shift(base.with_amplitude(e)) / kMHz;
    std::vector<double> shifted(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) shifted[i] = mwfield::shifted_detuning(grid[i], shift);
    spectra.push_back(rho_of(meanfield::spectrum(sc.system, shifted, FreqUnit::TwoPiMHz,
                                                 meanfield::BranchPolicy::SweepUp)));
    const auto& s = spectra.back();
    peaks.push_back(grid[static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin())]);
    cols.push_back("rho_E_" + csv::format_double(e * 1e3) + "_mV_per_cm");
  }
  std::ostringstream ss;
  csv::Writer sw(ss);
  sw.header(cols);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sw.field(grid[i]);
    for (const auto& s : spectra) sw.field(s[i]);
    sw.end_row();
  }
  const std::string spec = ss.str();
  art.csv("spectra.csv", spec);
  art.svg("spectra.svg", spec, {sc.name + ": spectra under MW drive", 0, {}});

  const auto op = base.with_amplitude(sc.analysis.operating_amplitude);
  const double du = sc.analysis.shift_uncertainty_2pi_mhz * kMHz;
  const double local = metrology::shift_uncertainty_to_field(du, op);
  const double bound = metrology::zero_field_bound(du, op);

  // Quadratic-regime exponent on [0, 0.1 Delta_mw / kappa].
  const double e_max = 0.1 * base.mw_detuning / base.coupling;
  std::vector<double> lx, ly;
  for (int k = 1; k <= 20; ++k) {
    const double e = e_max * k / 20.0;
    lx.push_back(std::log(e));
    ly.push_back(std::log(mwfield::stark_shift(base.with_amplitude(e))));
  }
  const double exponent = fits::linear_fit(lx, ly).slope;

  metrics["shift_at_operating_2pi_MHz"] = mwfield::stark_shift(op) / kMHz;
  metrics["field_error_local_mV_per_cm"] = local * 1e3;
  metrics["field_error_zero_field_mV_per_cm"] = bound * 1e3;
  metrics["quadratic_exponent"] = exponent;

  ordered_json j = header(sc);
  j["mw"] = ordered_json{{"detuning_2pi_MHz", base.mw_detuning / kMHz},
                         {"coupling_2pi_MHz_per_V_per_cm", base.coupling / kMHz},
                         {"frequency_GHz", base.frequency_ghz},
                         {"calibration_amplitude_mV_per_cm", sc.mw->calibration_amplitude * 1e3},
                         {"calibration_shift_2pi_MHz", sc.mw->calibration_shift_2pi_mhz},
                         {"shift_sign", "delta -> delta + shift"}};
  j["operating_amplitude_mV_per_cm"] = sc.analysis.operating_amplitude * 1e3;
  j["shift_at_operating_2pi_MHz"] = mwfield::stark_shift(op) / kMHz;
  j["shift_uncertainty_2pi_MHz"] = sc.analysis.shift_uncertainty_2pi_mhz;
  j["field_error_local_mV_per_cm"] = local * 1e3;
  j["field_error_zero_field_mV_per_cm"] = bound * 1e3;
  j["quadratic_exponent"] = exponent;
  ordered_json pk = ordered_json::array();
  for (std::size_t i = 0; i < peaks.size(); ++i)
    pk.push_back({{"E_mw_mV_per_cm", sc.analysis.amplitudes[i] * 1e3}, {"peak_delta_2pi_MHz", peaks[i]}});
  j["spectrum_peaks"] = std::move(pk);
  art.json("summary.json", std::move(j));
}

// ---------------------------------------------------------- field response

double fold_detuning(const SystemParams& p) {
  // Upper end of the bistable interval, where the lower branch ends; without
  // bistability, the detuning of steepest response.
  if (const auto iv = meanfield::bistable_interval(p)) return iv->hi;
  return meanfield::self_consistent_critical_point(p).delta_c.value;
}

void run_field_response(const Scenario& sc, Artifacts& art, ordered_json& metrics) {
  const auto base = sc.mw->field();
  const auto ladder = sc.mw->ladder();
  const SystemParams single = sc.reference_system();
  const SystemParams& many = sc.system;

  metrology::FieldScanConfig cfg;
  cfg.mw = base;
  cfg.dwell = sc.analysis.field_dwell;
  cfg.detector = sc.detector;
  cfg.map = sc.map;

  cfg.probe_detuning = meanfield::self_consistent_critical_point(single).delta_c.value;
  const double single_probe = cfg.probe_detuning;
  const auto s1 = metrology::field_scan(single, cfg, ladder);

  const double shift_th = mwfield::stark_shift(base.with_amplitude(sc.analysis.threshold_amplitude)) / kMHz;
  cfg.probe_detuning = fold_detuning(many) - shift_th;
  const double many_probe = cfg.probe_detuning;
  const auto s2 = metrology::field_scan(many, cfg, ladder);

  const auto r1 = metrology::field_response(s1.scan, {*sc.analysis.reference_fit_lo, *sc.analysis.reference_fit_hi});
  const auto r2 = metrology::field_response(s2.scan, {*sc.analysis.fit_lo, *sc.analysis.fit_hi}, &r1);

  std::ostringstream os;
  csv::Writer w(os);
  w.header({"E_mw_mV_per_cm", "shift_2pi_MHz", "rho_single", "rho_many", "counts_single", "counts_many"});
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    w.field(ladder[i] * 1e3).field(s1.shift[i] / kMHz).field(s1.rho[i]).field(s2.rho[i]);
    w.field(s1.scan.bins[i].mean_counts).field(s2.scan.bins[i].mean_counts);
    w.end_row();
  }
  const std::string table = os.str();
  art.csv("field_response.csv", table);
  art.svg("field_response.svg", table, {sc.name + ": mean counts vs MW amplitude", 0, {4, 5}});

  auto report = [](const metrology::SensitivityReport& r) {
    ordered_json j = metrology::to_json(r);
    j["slope_counts_per_mV_per_cm"] = r.slope * 1e-3;
    j["offset_mV_per_cm"] = r.offset * 1e3;
    j["field_error_uV_per_cm"] = r.flat ? ordered_json(nullptr) : ordered_json(r.field_error * 1e6);
    j["sensitivity_nV_per_cm_per_rtHz"] = r.flat ? ordered_json(nullptr) : ordered_json(r.sensitivity * 1e9);
    return j;
  };
  metrics["slope_ratio"] = opt(r2.slope_ratio);
  metrics["fisher_ratio"] = opt(r2.fisher_ratio);
  metrics["sensitivity_nV_per_cm_per_rtHz"] = finite_or_null(r2.sensitivity * 1e9);

  ordered_json j = header(sc);
  j["reference"] = system_json(single);
  j["mw_coupling_2pi_MHz_per_V_per_cm"] = base.coupling / kMHz;
  j["probe_detuning_single_2pi_MHz"] = single_probe;
  j["probe_detuning_many_2pi_MHz"] = many_probe;
  j["threshold_amplitude_mV_per_cm"] = sc.analysis.threshold_amplitude * 1e3;
  j["single_body"] = report(r1);
  j["many_body"] = report(r2);
  if (sc.analysis.target_error > 0.0 && sc.analysis.target_dwell > 0.0) {
    const double s = metrology::equivalent_sensitivity(sc.analysis.target_error, sc.analysis.target_dwell);
    j["sensitivity_identity"] = ordered_json{{"field_error_uV_per_cm", sc.analysis.target_error * 1e6},
                                             {"dwell_us", sc.analysis.target_dwell * 1e6},
                                             {"sensitivity_nV_per_cm_per_rtHz", s * 1e9}};
    metrics["identity_nV_per_cm_per_rtHz"] = s * 1e9;
  }
  art.json("summary.json", std::move(j));
}

// -------------------------------------------------------------- hysteresis

void run_hysteresis(const Scenario& sc, Artifacts& art, ordered_json& metrics) {
  const auto& pr = *sc.protocol;
  const double lo = std::min(pr.delta_start.value, pr.delta_end.value);
  const double hi = std::max(pr.delta_start.value, pr.delta_end.value);
  const auto loop = dynamics::hysteresis_loop(sc.system, mhz2pi(lo), mhz2pi(hi), pr.bins, pr.dwell_per_bin);

  std::ostringstream os;
  csv::Writer w(os);
  w.header({"delta_2pi_MHz", "rho_up", "rho_down"});
  for (std::size_t i = 0; i < loop.detuning.size(); ++i) {
    w.field(loop.detuning[i]).field(loop.rho_up[i]).field(loop.rho_down[i]);
    w.end_row();
  }
  const std::string table = os.str();
  art.csv("loop.csv", table);
  art.svg("loop.svg", table, {sc.name + ": swept population, both directions", 0, {1, 2}});

  std::ostringstream as;
  csv::Writer aw(as);
  aw.header({"interaction_2pi_MHz", "loop_area_2pi_MHz", "bistable", "jump_up_2pi_MHz", "jump_down_2pi_MHz"});
  ordered_json ladder = ordered_json::array();
  for (double v : sc.analysis.interactions) {
    const auto p = sc.system.with_interaction(v);
    const auto l = dynamics::hysteresis_loop(p, mhz2pi(lo), mhz2pi(hi), pr.bins, pr.dwell_per_bin);
    const bool bistable = meanfield::bistable_interval(p).has_value();
    aw.field(v).field(l.area).field(static_cast<long long>(bistable)).field(l.jump_up).field(l.jump_down);
    aw.end_row();
    ladder.push_back({{"interaction_2pi_MHz", v},
                      {"loop_area_2pi_MHz", l.area},
                      {"bistable", bistable},
                      {"loop_detected", l.area > sc.analysis.area_threshold}});
  }
  if (!sc.analysis.interactions.empty()) art.csv("areas.csv", as.str());

  metrics["loop_area_2pi_MHz"] = loop.area;
  metrics["jump_up_2pi_MHz"] = loop.jump_up;
  metrics["jump_down_2pi_MHz"] = loop.jump_down;

  ordered_json j = header(sc);
  j["criticality"] = criticality_json(sc.system);
  j["loop_area_2pi_MHz"] = loop.area;
  j["area_threshold_2pi_MHz"] = sc.analysis.area_threshold;
  j["jump_up_2pi_MHz"] = loop.jump_up;
  j["jump_down_2pi_MHz"] = loop.jump_down;
  j["interaction_ladder"] = std::move(ladder);
  art.json("summary.json", std::move(j));
}

}  // namespace

std::string ScenarioResult::summary() const {
  std::string s = name + ":";
  for (const auto& [k, v] : metrics.items()) {
    s += " " + k + "=";
    if (v.is_number_float())
      s += csv::format_double(v.get<double>());
    else
      s += v.dump();
  }
  s += " ->";
  for (const auto& f : files) s += " " + f;
  return s;
}

ScenarioResult run(const Scenario& input, const RunOptions& options) {
  Scenario sc = input;
  if (options.seed) sc.detector.seed = *options.seed;
  Artifacts art(sc, options);
  ordered_json metrics = ordered_json::object();
  switch (sc.kind) {
    case Kind::Spectrum: run_spectrum(sc, art, metrics); break;
    case Kind::DwellLadder: run_dwell_ladder(sc, art, metrics, options.parallel); break;
    case Kind::Susceptibility: run_susceptibility(sc, art, metrics); break;
    case Kind::Stark: run_stark(sc, art, metrics); break;
    case Kind::FieldResponse: run_field_response(sc, art, metrics); break;
    case Kind::Hysteresis: run_hysteresis(sc, art, metrics); break;
  }
  return {sc.name, std::move(art.files), std::move(metrics)};
}

}  // namespace rydcrit::runner
