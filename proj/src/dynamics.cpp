#include "rydcrit/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "rydcrit/csv.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/meanfield.hpp"

namespace rydcrit::dynamics {

namespace {

using Vec = std::array<double, 3>;  // Re rho_gr, Im rho_gr, rho_rr

Vec to_vec(const BlochState& s) { return {s.coherence.real(), s.coherence.imag(), s.population}; }

BlochState to_state(const Vec& v, double t) {
  BlochState s;
  s.coherence = {v[0], v[1]};
  s.population = v[2];
  s.time = t;
  return s;
}

// Dormand-Prince 5(4) with PI step-size control. Parameters in rad/s, time in s.
class Integrator {
 public:
  Integrator(const SystemParams& p, const IntegratorOptions& o) : p_(p), o_(o) {
    if (!(o.abs_tol > 0.0) || !(o.rel_tol >= 0.0))
      throw Error(Errc::InvalidArgument, "integrator tolerances must be positive");
    if (!(o.max_step_fraction > 0.0 && o.max_step_fraction <= 1.0))
      throw Error(Errc::InvalidArgument, "max_step_fraction must lie in (0, 1]");
  }

  // Advances y from t to t_end under detuning delta(t); obs(t0, y0, t1, y1) sees every
  // accepted step.
  template <class Delta, class Obs>
  void advance(Vec& y, double& t, double t_end, double h_max, Delta delta, Obs&& obs) {
    if (h_ == 0.0) {
      const double scale = p_.gamma() + p_.rabi() + std::abs(p_.interaction()) +
                           std::abs(delta(t));
      h_ = std::min(h_max, 0.05 / scale);
    }
    Vec k1 = rhs(y, delta(t));
    while (t < t_end) {
      if (stats.steps + stats.rejected >= o_.max_steps)
        fail(delta(t), "step budget exhausted");
      double h = std::min({h_, h_max, t_end - t});
      const bool clipped = h < h_;
      const double h_before = h_;
      for (;;) {
        if (h < o_.min_step) fail(delta(t), "step size underflow");
        Vec y_new, k7;
        const double err = step(y, t, h, delta, k1, y_new, k7);
        if (err <= 1.0) {
          const bool last = (t_end - t) - h <= 1e-12 * h;
          const double t_new = last ? t_end : t + h;
          obs(t, y, t_new, y_new);
          track(y_new);
          y = y_new;
          t = t_new;
          k1 = k7;
          ++stats.steps;
          const double fac = err == 0.0
                                 ? 5.0
                                 : std::clamp(0.9 * std::pow(err, -0.7 / 5.0) *
                                                  std::pow(err_prev_, 0.4 / 5.0),
                                              0.2, 5.0);
          err_prev_ = std::max(err, 1e-4);
          h_ = h * fac;
          if (clipped) h_ = std::max(h_, h_before);
          break;
        }
        ++stats.rejected;
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        h_ = h;
      }
    }
  }

  IntegratorStats stats;

 private:
  Vec rhs(const Vec& v, double delta) const {
    const double om = p_.rabi();
    const double g = p_.gamma();
    const double de = delta - p_.interaction() * v[2];
    const double pop_coupling = o_.convention == RabiConvention::Consistent ? om : 2.0 * om;
    return {-de * v[1] - 0.5 * g * v[0], 0.5 * om * (2.0 * v[2] - 1.0) + de * v[0] - 0.5 * g * v[1],
            -pop_coupling * v[1] - g * v[2]};
  }

  template <class Delta>
  double step(const Vec& y, double t, double h, Delta delta, const Vec& k1, Vec& y_new,
              Vec& k7) const {
    auto comb = [&](std::initializer_list<std::pair<double, const Vec*>> terms) {
      Vec r = y;
      for (const auto& [c, k] : terms)
        for (int i = 0; i < 3; ++i) r[i] += h * c * (*k)[i];
      return r;
    };
    const Vec k2 = rhs(comb({{1.0 / 5, &k1}}), delta(t + h / 5));
    const Vec k3 = rhs(comb({{3.0 / 40, &k1}, {9.0 / 40, &k2}}), delta(t + 3 * h / 10));
    const Vec k4 = rhs(comb({{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}),
                       delta(t + 4 * h / 5));
    const Vec k5 = rhs(comb({{19372.0 / 6561, &k1},
                             {-25360.0 / 2187, &k2},
                             {64448.0 / 6561, &k3},
                             {-212.0 / 729, &k4}}),
                       delta(t + 8 * h / 9));
    const Vec k6 = rhs(comb({{9017.0 / 3168, &k1},
                             {-355.0 / 33, &k2},
                             {46732.0 / 5247, &k3},
                             {49.0 / 176, &k4},
                             {-5103.0 / 18656, &k5}}),
                       delta(t + h));
    y_new = comb({{35.0 / 384, &k1},
                  {500.0 / 1113, &k3},
                  {125.0 / 192, &k4},
                  {-2187.0 / 6784, &k5},
                  {11.0 / 84, &k6}});
    k7 = rhs(y_new, delta(t + h));
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double e = h * (71.0 / 57600 * k1[i] - 71.0 / 16695 * k3[i] + 71.0 / 1920 * k4[i] -
                            17253.0 / 339200 * k5[i] + 22.0 / 525 * k6[i] - 1.0 / 40 * k7[i]);
      const double sc = o_.abs_tol + o_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (!std::isfinite(err)) return std::numeric_limits<double>::infinity();
    return err;
  }

  void track(const Vec& v) {
    const double excess = std::max({0.0, -v[2], v[2] - 1.0});
    stats.max_population_excess = std::max(stats.max_population_excess, excess);
    stats.max_coherence = std::max(stats.max_coherence, std::hypot(v[0], v[1]));
  }

  [[noreturn]] void fail(double delta, const char* why) const {
    throw Error(Errc::StepFailure, std::string(why) + " at detuning " +
                                       csv::format_double(delta / kRadPerSecondPerTwoPiMHz) +
                                       " x 2pi MHz");
  }

  SystemParams p_;
  IntegratorOptions o_;
  double h_ = 0.0;
  double err_prev_ = 1e-4;
};

void require_physical(const BlochState& s) {
  if (!std::isfinite(s.population) || !std::isfinite(std::abs(s.coherence)) ||
      s.population < -1e-9 || s.population > 1.0 + 1e-9 || std::abs(s.coherence) > 0.5 + 1e-9)
    throw Error(Errc::InvalidArgument, "initial Bloch state is unphysical");
}

}  // namespace

SweepProtocol SweepProtocol::from_bins(Frequency start, Frequency end, int bins, double dwell,
                                       SweepMode mode) {
  SweepProtocol pr;
  pr.delta_start = start;
  pr.delta_end = end;
  pr.bins = bins;
  pr.dwell_per_bin = dwell;
  pr.mode = mode;
  if (bins > 0 && dwell > 0.0)
    pr.rate = std::abs(end.rad_per_s() - start.rad_per_s()) / (bins * dwell);
  return pr;
}

void SweepProtocol::validate() const {
  if (!std::isfinite(delta_start.rad_per_s()) || !std::isfinite(delta_end.rad_per_s()))
    throw Error(Errc::InvalidArgument, "sweep endpoints must be finite");
  if (delta_start.rad_per_s() == delta_end.rad_per_s())
    throw Error(Errc::InvalidArgument, "sweep endpoints coincide");
  if (!(rate > 0.0)) throw Error(Errc::InvalidArgument, "sweep rate must be positive");
  if (bins < 2) throw Error(Errc::InvalidArgument, "sweep needs at least 2 bins");
  if (!(dwell_per_bin > 0.0)) throw Error(Errc::InvalidArgument, "dwell must be positive");
  const double span = std::abs(delta_end.rad_per_s() - delta_start.rad_per_s());
  if (std::abs(span / rate - duration()) > 1e-9 * duration())
    throw Error(Errc::InvalidArgument, "sweep rate inconsistent with bins x dwell");
}

double SweepProtocol::direction() const {
  return delta_end.rad_per_s() >= delta_start.rad_per_s() ? 1.0 : -1.0;
}

double SweepProtocol::bin_step() const {
  return (delta_end.rad_per_s() - delta_start.rad_per_s()) / bins;
}

double SweepProtocol::detuning_at(double t) const {
  if (mode == SweepMode::Stepwise) {
    const int i = std::clamp(static_cast<int>(std::floor(t / dwell_per_bin)), 0, bins - 1);
    return bin_center(i);
  }
  return delta_start.rad_per_s() + direction() * rate * t;
}

double SweepProtocol::bin_center(int i) const {
  return delta_start.rad_per_s() + (i + 0.5) * bin_step();
}

SweepProtocol SweepProtocol::reversed() const {
  SweepProtocol r = *this;
  std::swap(r.delta_start, r.delta_end);
  return r;
}

std::vector<double> SweepTrajectory::bin_centers_2pi_mhz() const {
  std::vector<double> out(bin_centers.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bin_centers[i] / kRadPerSecondPerTwoPiMHz;
  return out;
}

BlochState default_initial_state(const SystemParams& p, const SweepProtocol& protocol,
                                 RabiConvention convention) {
  const Frequency d0 = protocol.delta_start.in(p.unit());
  const auto set = meanfield::steady_state_roots(p, d0);
  const double rho = protocol.direction() > 0 ? set.roots.front().rho : set.roots.back().rho;
  return stationary_state(p, d0, rho, convention);
}

namespace {

SweepTrajectory run_bins(const SystemParams& p, const SweepProtocol& protocol,
                         const BlochState& initial, const IntegratorOptions& options,
                         const std::vector<double>& hold) {
  require_physical(initial);
  const SystemParams pr = p.in(FreqUnit::RadPerSecond);
  Integrator integ(pr, options);
  SweepTrajectory tr{{}, {}, {}, p, protocol, {}};
  const int n = protocol.bins;
  tr.samples.reserve(static_cast<std::size_t>(n) + 1);
  tr.bin_centers.resize(n);
  tr.bin_mean_rho.resize(n);

  Vec y = to_vec(initial);
  double t = 0.0;
  tr.samples.push_back({0.0, hold.empty() ? protocol.detuning_at(0.0) : hold[0], to_state(y, 0.0)});
  const double dwell = protocol.dwell_per_bin;
  const double h_max = dwell * options.max_step_fraction;
  for (int i = 0; i < n; ++i) {
    const double t_end = (i + 1) * dwell;
    double acc = 0.0;
    auto obs = [&acc](double t0, const Vec& y0, double t1, const Vec& y1) {
      acc += 0.5 * (y0[2] + y1[2]) * (t1 - t0);
    };
    double d_end;
    if (hold.empty() && protocol.mode == SweepMode::Ramp) {
      auto delta = [&protocol](double tt) { return protocol.detuning_at(tt); };
      integ.advance(y, t, t_end, h_max, delta, obs);
      tr.bin_centers[i] = protocol.bin_center(i);
      d_end = protocol.detuning_at(t_end);
    } else {
      const double d = hold.empty() ? protocol.bin_center(i) : hold[i];
      auto delta = [d](double) { return d; };
      integ.advance(y, t, t_end, h_max, delta, obs);
      tr.bin_centers[i] = d;
      d_end = d;
    }
    tr.bin_mean_rho[i] = acc / dwell;
    tr.samples.push_back({t, d_end, to_state(y, t)});
  }
  tr.stats = integ.stats;
  return tr;
}

}  // namespace

SweepTrajectory integrate_sweep(const SystemParams& p, const SweepProtocol& protocol,
                                std::optional<BlochState> initial,
                                const IntegratorOptions& options) {
  protocol.validate();
  const BlochState s0 = initial ? *initial : default_initial_state(p, protocol, options.convention);
  return run_bins(p, protocol, s0, options, {});
}

SweepTrajectory integrate_schedule(const SystemParams& p, std::span<const double> delta_rad,
                                   double dwell, const BlochState& initial,
                                   const IntegratorOptions& options) {
  if (delta_rad.empty()) throw Error(Errc::InvalidArgument, "empty detuning schedule");
  if (!(dwell > 0.0)) throw Error(Errc::InvalidArgument, "dwell must be positive");
  SweepProtocol pr;
  pr.delta_start = rad_s(delta_rad.front());
  pr.delta_end = rad_s(delta_rad.back());
  pr.bins = static_cast<int>(delta_rad.size());
  pr.dwell_per_bin = dwell;
  pr.mode = SweepMode::Stepwise;
  const double span = std::abs(delta_rad.back() - delta_rad.front());
  pr.rate = span / (pr.bins * dwell);
  return run_bins(p, pr, initial, options, std::vector<double>(delta_rad.begin(), delta_rad.end()));
}

BlochState evolve(const SystemParams& p, Frequency delta, const BlochState& initial,
                  double duration, const IntegratorOptions& options) {
  require_physical(initial);
  if (!(duration >= 0.0)) throw Error(Errc::InvalidArgument, "duration must be nonnegative");
  const SystemParams pr = p.in(FreqUnit::RadPerSecond);
  const double d = delta.rad_per_s();
  Integrator integ(pr, options);
  Vec y = to_vec(initial);
  double t = initial.time;
  const double t_end = initial.time + duration;
  const double h_max = std::max(duration * options.max_step_fraction, 1e-3 / pr.gamma());
  integ.advance(y, t, t_end, h_max, [d](double) { return d; },
                [](double, const Vec&, double, const Vec&) {});
  return to_state(y, t_end);
}

double relaxation_time(const SystemParams& p, Frequency delta, double perturbation,
                       std::optional<double> rho_hint, const RelaxationOptions& options) {
  if (!(perturbation != 0.0) || !std::isfinite(perturbation))
    throw Error(Errc::InvalidArgument, "perturbation must be nonzero");
  const Frequency dp = delta.in(p.unit());
  const auto set = meanfield::steady_state_roots(p, dp);
  const meanfield::Root* best = nullptr;
  for (const auto& r : set.roots) {
    if (!r.stable) continue;
    if (!best || (rho_hint && std::abs(r.rho - *rho_hint) < std::abs(best->rho - *rho_hint)))
      best = &r;
  }
  if (!best) throw Error(Errc::InvalidArgument, "no stable steady state at this detuning");
  const BlochState star = stationary_state(p, dp, best->rho, options.integrator.convention);
  BlochState kicked = star;
  kicked.population = std::clamp(star.population + perturbation, 0.0, 1.0);
  const Vec target = to_vec(star);
  auto dist = [&target](const Vec& v) {
    return std::sqrt((v[0] - target[0]) * (v[0] - target[0]) +
                     (v[1] - target[1]) * (v[1] - target[1]) +
                     (v[2] - target[2]) * (v[2] - target[2]));
  };
  Vec y = to_vec(kicked);
  const double d0 = dist(y);
  if (d0 == 0.0) return 0.0;
  const double threshold = d0 / std::numbers::e;
  const double settled = 1e-3 * threshold;

  const SystemParams pr = p.in(FreqUnit::RadPerSecond);
  const double d = dp.rad_per_s();
  const double tau = 1.0 / pr.gamma();
  const double horizon = options.horizon_lifetimes * tau;
  Integrator integ(pr, options.integrator);
  double t = 0.0;
  double last_exit = 0.0;
  bool done = false;
  auto obs = [&](double t0, const Vec& y0, double t1, const Vec& y1) {
    const double a = dist(y0) - threshold;
    const double b = dist(y1) - threshold;
    if (a > 0.0 && b <= 0.0) last_exit = t0 + (t1 - t0) * a / (a - b);
    if (b > 0.0) last_exit = t1;
    if (dist(y1) < settled) done = true;
  };
  while (!done) {
    if (t >= horizon)
      throw Error(Errc::NoConvergence, "relaxation did not settle within the horizon");
    integ.advance(y, t, std::min(horizon, t + tau), 0.02 * tau, [d](double) { return d; }, obs);
  }
  return last_exit;
}

HysteresisLoop hysteresis_loop(const SystemParams& p, Frequency lo, Frequency hi, int bins,
                               double dwell, const IntegratorOptions& options) {
  const auto up_pr = SweepProtocol::from_bins(lo, hi, bins, dwell);
  const auto up = integrate_sweep(p, up_pr, std::nullopt, options);
  const auto down = integrate_sweep(p, up_pr.reversed(), std::nullopt, options);
  HysteresisLoop loop;
  const double to_unit = convert(1.0, FreqUnit::RadPerSecond, p.unit());
  const auto n = static_cast<std::size_t>(bins);
  loop.detuning.resize(n);
  loop.rho_up = up.bin_mean_rho;
  loop.rho_down.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    loop.detuning[i] = up.bin_centers[i] * to_unit;
    loop.rho_down[i] = down.bin_mean_rho[n - 1 - i];
  }
  const double width = std::abs(up_pr.bin_step()) * to_unit;
  std::size_t ju = 0, jd = 0;
  double su = -1.0, sd = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    loop.area += std::abs(loop.rho_up[i] - loop.rho_down[i]) * width;
    if (i + 1 < n) {
      const double du = std::abs(loop.rho_up[i + 1] - loop.rho_up[i]);
      const double dd = std::abs(loop.rho_down[i + 1] - loop.rho_down[i]);
      if (du > su) { su = du; ju = i; }
      if (dd > sd) { sd = dd; jd = i; }
    }
  }
  if (n >= 2) {
    loop.jump_up = 0.5 * (loop.detuning[ju] + loop.detuning[ju + 1]);
    loop.jump_down = 0.5 * (loop.detuning[jd] + loop.detuning[jd + 1]);
  }
  return loop;
}

void write_csv(const SweepTrajectory& tr, std::ostream& os) {
  csv::Writer w(os);
  w.header({"t_s", "delta_2pi_MHz", "rho_rr", "re_rho_gr", "im_rho_gr"});
  for (const auto& s : tr.samples) {
    w.field(s.time).field(s.detuning / kRadPerSecondPerTwoPiMHz).field(s.state.population);
    w.field(s.state.coherence.real()).field(s.state.coherence.imag());
    w.end_row();
  }
}

nlohmann::ordered_json to_json(const IntegratorStats& stats) {
  nlohmann::ordered_json j;
  j["steps"] = stats.steps;
  j["rejected"] = stats.rejected;
  j["max_population_excess"] = stats.max_population_excess;
  j["max_coherence"] = stats.max_coherence;
  return j;
}

}  // namespace rydcrit::dynamics
