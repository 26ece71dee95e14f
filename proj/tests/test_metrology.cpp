#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "rydcrit/detector.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/fits.hpp"
#include "rydcrit/metrology.hpp"
#include "rydcrit/mwfield.hpp"

using namespace rydcrit;
namespace det = rydcrit::detector;
namespace me = rydcrit::metrology;

namespace {

constexpr double kMHz = kRadPerSecondPerTwoPiMHz;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

// Free-particle Lorentzian population at detuning d (2pi MHz), used as a smooth test signal.
double lorentz(double d) { return 1.0 / (d * d + 8.25); }

}  // namespace

TEST_CASE("linear fit recovers exact lines and reports errors") {
  const auto x = linspace(0.0, 1.0, 11);
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 - 2.0 * v);
  const auto f = fits::linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.slope_stderr < 1e-12);
  CHECK_THROWS_AS(fits::linear_fit(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(fits::linear_fit(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("power-law fit recovery over 100 seeds at 1% noise") {
  const std::vector<double> t{0.02e-6, 0.05e-6, 0.1e-6, 0.2e-6, 0.5e-6, 1e-6, 2e-6};
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(1000 + seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> f;
    for (double x : t) f.push_back(2.0e4 * std::pow(x / 1e-6, 1.28) * (1.0 + noise(gen)));
    const auto fit = fits::fit_power_law(t, f, 1e-6);
    worst = std::max(worst, std::abs(fit.exponent - 1.28));
    CHECK(fit.amplitude == doctest::Approx(2.0e4).epsilon(0.03));
  }
  CHECK(worst <= 0.02);
  CHECK_THROWS_AS(fits::fit_power_law(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}), Error);
  CHECK_THROWS_AS(fits::fit_power_law(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{1.0, -2.0, 3.0}), Error);
}

TEST_CASE("susceptibility fit recovery over 100 seeds at 2% noise") {
  const auto d = linspace(-16.0, -11.6, 60);
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(2000 + seed);
    std::normal_distribution<double> noise(0.0, 0.02);
    std::vector<double> y;
    for (double x : d) y.push_back(0.02 * std::pow(std::abs(x + 11.3), -2.0) * (1.0 + noise(gen)));
    const auto fit = fits::fit_susceptibility(d, y);
    worst = std::max(worst, std::abs(fit.exponent - 2.0));
    CHECK(fit.center == doctest::Approx(-11.3).epsilon(0.01));
  }
  CHECK(worst <= 0.1);
}

TEST_CASE("Fisher curve of a linear ramp equals slope^2 / Var") {
  det::DetectorParams dp;
  const auto axis = linspace(0.0, 1.0, 41);
  std::vector<double> eps;
  for (double a : axis) eps.push_back(0.1 + 0.2 * a);
  const double t = 5e-6;
  const auto scan = det::analytic_scan("x", axis, eps, dp, t);
  const auto c = me::fisher_curve(scan, 2);
  REQUIRE(c.fisher.size() == 37);
  const double r = dp.detected_rate();
  for (std::size_t k = 0; k < c.fisher.size(); ++k) {
    const double e = 0.1 + 0.2 * c.axis[k];
    const double ref = std::pow(r * 0.2 * t, 2) / (2.0 * r * t + r * e * t);
    CHECK(c.fisher[k] == doctest::Approx(ref).epsilon(1e-9));
  }
  const auto cv = me::fisher_curve(scan, 2, true);
  const double e = 0.1 + 0.2 * cv.axis[0];
  const double var = (2.0 + e) * r * t;
  CHECK(cv.variance_term[0] == doctest::Approx(std::pow(r * 0.2 * t, 2) / (2.0 * var * var)).epsilon(1e-8));
  CHECK_THROWS_AS(me::fisher_curve(scan, 30), Error);
  CHECK_THROWS_AS(me::fisher_curve(scan, 1), Error);
  CHECK(me::cramer_rao(4.0) == 0.5);
  CHECK(me::cramer_rao(4.0, 4.0) == 0.25);
  CHECK_THROWS_AS(me::cramer_rao(0.0), Error);
}

TEST_CASE("Fisher information scaling law per variance source") {
  det::DetectorParams dp;
  dp.seed = 5;
  const auto axis = linspace(-5.0, 5.0, 21);
  std::vector<double> eps;
  for (double a : axis) eps.push_back(lorentz(a));
  const double c = 3.0;

  // Analytic shot-noise variance: more flux by c gives c times the information.
  auto dp2 = dp;
  dp2.photon_flux *= c;
  const auto f1 = me::fisher_curve(det::analytic_scan("x", axis, eps, dp, 1e-6), 2);
  const auto f2 = me::fisher_curve(det::analytic_scan("x", axis, eps, dp2, 1e-6), 2);
  for (std::size_t k = 0; k < f1.fisher.size(); ++k)
    CHECK(f2.fisher[k] == doctest::Approx(c * f1.fisher[k]).epsilon(1e-12));

  // Empirical variance: rescaling every count by c leaves the information unchanged.
  auto s = det::sample_scan("x", axis, eps, dp, 1e-6, det::CountModel::Gaussian, 50);
  auto scaled = s;
  for (auto& b : scaled.bins) {
    b.mean_counts *= c;
    for (auto& x : b.samples) x *= c;
  }
  const auto e1 = me::fisher_curve(s, 2, false, me::VarianceSource::Empirical);
  const auto e2 = me::fisher_curve(scaled, 2, false, me::VarianceSource::Empirical);
  for (std::size_t k = 0; k < e1.fisher.size(); ++k) {
    CHECK(e2.slope[k] == doctest::Approx(c * e1.slope[k]).epsilon(1e-12));
    CHECK(e2.variance[k] == doctest::Approx(c * c * e1.variance[k]).epsilon(1e-12));
    CHECK(e2.fisher[k] == doctest::Approx(e1.fisher[k]).epsilon(1e-12));
  }
}

TEST_CASE("Monte-Carlo estimator spread matches the analytic Fisher information") {
  me::MonteCarloConfig cfg;
  cfg.trials = 4000;
  cfg.dwell = 1e-6;
  cfg.detector.seed = 17;
  const auto axis = linspace(-6.0, 6.0, 61);
  auto model = [&axis](double theta) {
    std::vector<double> e;
    for (double a : axis) e.push_back(lorentz(a - theta));
    return e;
  };
  const auto mc = me::monte_carlo_fisher(model, cfg);
  CHECK(mc.empirical_fisher == doctest::Approx(mc.analytic_fisher).epsilon(0.1));
  CHECK(std::abs(mc.estimator_mean) < 5.0 * mc.cramer_rao / std::sqrt(cfg.trials));
  // Not beating the bound beyond 3 sigma of the variance estimate.
  const double ratio = mc.estimator_variance / (mc.cramer_rao * mc.cramer_rao);
  CHECK(ratio > 1.0 - 3.0 * mc.variance_rel_stderr);
  auto serial = cfg;
  serial.parallel = false;
  const auto mc2 = me::monte_carlo_fisher(model, serial);
  CHECK(mc2.estimator_variance == mc.estimator_variance);
  auto flat = [](double) { return std::vector<double>(5, 0.1); };
  CHECK_THROWS_AS(me::monte_carlo_fisher(flat, cfg), Error);
}

TEST_CASE("field response on a synthetic linear scan") {
  det::DetectorParams dp;
  const auto axis = linspace(0.0, 4e-3, 81);
  std::vector<double> eps, flat;
  for (double a : axis) {
    eps.push_back(0.1 + 20.0 * a);
    flat.push_back(0.1);
  }
  const auto scan = det::analytic_scan("E", axis, eps, dp, 5e-6);
  const auto ref = me::field_response(scan, {0.0, 4e-3});
  const double r = dp.detected_rate();
  CHECK(ref.slope == doctest::Approx(r * 20.0 * 5e-6).epsilon(1e-9));
  CHECK_FALSE(ref.flat);
  CHECK(ref.field_error == doctest::Approx(std::sqrt(ref.variance) / ref.slope).epsilon(1e-12));
  CHECK(ref.sensitivity == doctest::Approx(ref.field_error * std::sqrt(5e-6)).epsilon(1e-12));

  std::vector<double> steep;
  for (double a : axis) steep.push_back(0.1 + 200.0 * a);
  const auto many = me::field_response(det::analytic_scan("E", axis, steep, dp, 5e-6), {0.0, 4e-3}, &ref);
  CHECK(*many.slope_ratio == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(*many.fisher_ratio_shared == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(*many.fisher_ratio < 100.0);

  const auto none = me::field_response(det::analytic_scan("E", axis, flat, dp, 5e-6), {0.0, 4e-3});
  CHECK(none.flat);
  CHECK(std::isinf(none.field_error));
  CHECK_THROWS_AS(me::field_response(scan, {1e-3, 1e-3}), Error);
  CHECK_THROWS_AS(me::field_response(scan, {1e-3, 1.04e-3}), Error);
}

TEST_CASE("sensitivity identity and shift-to-field conversion") {
  CHECK(me::equivalent_sensitivity(22e-6, 5e-6) * 1e9 == doctest::Approx(49.19).epsilon(1e-3));
  mwfield::MWField f;
  f.mw_detuning = 50.0 * kMHz;
  f.coupling = mwfield::calibrate_coupling(3.8e-3, 1.2 * kMHz, f.mw_detuning);
  const auto op = f.with_amplitude(3.8e-3);
  const double local = me::shift_uncertainty_to_field(0.3 * kMHz, op);
  CHECK(local == doctest::Approx(0.3 * kMHz / mwfield::stark_shift_derivative(op)).epsilon(1e-14));
  const double bound = me::zero_field_bound(0.3 * kMHz, f);
  CHECK(mwfield::stark_shift(f.with_amplitude(bound)) == doctest::Approx(0.3 * kMHz).epsilon(1e-12));
  CHECK_THROWS_AS(me::shift_uncertainty_to_field(0.3 * kMHz, f), Error);
}

TEST_CASE("field scan holds each rung and shifts the resonance") {
  const auto p = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  me::FieldScanConfig cfg;
  cfg.probe_detuning = -3.0;
  cfg.mw.mw_detuning = 50.0 * kMHz;
  cfg.mw.coupling = mwfield::calibrate_coupling(3.8e-3, 1.2 * kMHz, cfg.mw.mw_detuning);
  cfg.dwell = 5e-6;
  const auto amps = linspace(0.0, 4e-3, 21);
  const auto fs = me::field_scan(p, cfg, amps);
  REQUIRE(fs.rho.size() == 21);
  // The shift moves the probe towards resonance, so population rises.
  for (std::size_t i = 1; i < fs.rho.size(); ++i) CHECK(fs.rho[i] > fs.rho[i - 1]);
  const double last = -3.0 + fs.shift.back() / kMHz;
  CHECK(fs.rho.back() == doctest::Approx(lorentz(last)).epsilon(1e-4));
  CHECK(fs.scan.axis_label == "E_mw_V_per_cm");
}
