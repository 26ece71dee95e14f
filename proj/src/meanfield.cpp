#include "rydcrit/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rydcrit/cubic.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/kernels.hpp"

namespace rydcrit::meanfield {

namespace {

double linear_term(const SystemParams& p) {
  return 0.5 * p.rabi() * p.rabi() + 0.25 * p.gamma() * p.gamma();
}

double constant_term(const SystemParams& p) { return 0.25 * p.rabi() * p.rabi(); }

// Monic coefficients after dividing by V^2.
struct Monic {
  double a, b, c;
};

Monic monic(const SystemParams& p, double delta) {
  const double v = p.interaction();
  const double v2 = v * v;
  return {-2.0 * delta / v, (delta * delta + linear_term(p)) / v2, -constant_term(p) / v2};
}

double scale_of(const SystemParams& p, double delta) {
  return std::max({std::abs(delta), p.rabi(), p.gamma()});
}

// |V| this small relative to the other rates is treated perturbatively.
bool weakly_interacting(const SystemParams& p, double delta) {
  return std::abs(p.interaction()) < 1e-7 * scale_of(p, delta);
}

double newton_polish(const SystemParams& p, double delta, double rho, int iterations) {
  double f = cubic_value(p, delta, rho);
  for (int i = 0; i < iterations; ++i) {
    const double d = cubic_drho(p, delta, rho);
    if (d == 0.0) break;
    const double next = rho - f / d;
    const double fn = cubic_value(p, delta, next);
    if (!(std::abs(fn) < std::abs(f))) break;
    rho = next;
    f = fn;
  }
  return rho;
}

int root_count(const SystemParams& p, double delta) {
  if (p.interaction() == 0.0 || p.rabi() == 0.0 || weakly_interacting(p, delta)) return 1;
  const auto m = monic(p, delta);
  return monic_cubic_discriminant(m.a, m.b, m.c) > 0.0 ? 3 : 1;
}

}  // namespace

double cubic_value(const SystemParams& p, double delta, double rho) {
  const double de = delta - p.interaction() * rho;
  return rho * (de * de + linear_term(p)) - constant_term(p);
}

double cubic_drho(const SystemParams& p, double delta, double rho) {
  const double v = p.interaction();
  return (delta - v * rho) * (delta - 3.0 * v * rho) + linear_term(p);
}

double cubic_ddelta(const SystemParams& p, double delta, double rho) {
  return 2.0 * rho * (delta - p.interaction() * rho);
}

double lorentzian_population(const SystemParams& p, double effective_detuning) {
  const double o2 = p.rabi() * p.rabi();
  return o2 / (4.0 * effective_detuning * effective_detuning + 2.0 * o2 + p.gamma() * p.gamma());
}

SteadyStateSet steady_state_roots(const SystemParams& p, Frequency delta_in) {
  require_same_unit(p.unit(), delta_in.unit, "detuning");
  const double delta = delta_in.value;
  if (!std::isfinite(delta)) throw Error(Errc::InvalidArgument, "detuning must be finite");

  SteadyStateSet out;
  out.detuning = delta;
  if (p.rabi() == 0.0) {
    out.roots.push_back({0.0, true});
    out.branch_count = 1;
    out.degenerate = true;
    return out;
  }

  std::vector<double> candidates;
  if (p.interaction() == 0.0) {
    candidates.push_back(lorentzian_population(p, delta));
  } else if (weakly_interacting(p, delta)) {
    candidates.push_back(newton_polish(p, delta, lorentzian_population(p, delta), 50));
  } else {
    const auto m = monic(p, delta);
    const CubicRoots r = solve_monic_cubic(m.a, m.b, m.c);
    const bool three = monic_cubic_discriminant(m.a, m.b, m.c) > 0.0 && r.count == 3;
    if (three) {
      for (std::size_t i = 0; i < 3; ++i) candidates.push_back(newton_polish(p, delta, r.x[i], 2));
    } else {
      // The lone real root; the closed form may lose digits to cancellation.
      candidates.push_back(newton_polish(p, delta, r.x[0], 6));
    }
  }

  constexpr double kSlack = 1e-14;
  std::vector<double> kept;
  for (double rho : candidates) {
    if (rho >= -kSlack && rho <= 1.0 + kSlack) {
      kept.push_back(std::clamp(rho, 0.0, 1.0));
    } else {
      ++out.discarded;
    }
  }
  std::sort(kept.begin(), kept.end());
  out.branch_count = static_cast<int>(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    // Positive df/drho marks the stable outer branches; for three simple
    // roots of a cubic with positive leading coefficient that is the middle one.
    const bool stable = kept.size() != 3 || i != 1;
    out.roots.push_back({kept[i], stable});
  }
  return out;
}

Slope slope_at(const SystemParams& p, Frequency delta_in, double rho, double residual_tol) {
  require_same_unit(p.unit(), delta_in.unit, "detuning");
  const double delta = delta_in.value;
  const double scale = std::max(constant_term(p), std::numeric_limits<double>::min());
  const double residual = cubic_value(p, delta, rho);
  if (std::abs(residual) > residual_tol * scale) {
    throw Error(Errc::OffManifold, "cubic residual " + std::to_string(residual) +
                                       " exceeds tolerance at rho=" + std::to_string(rho));
  }
  const double v = p.interaction();
  const double numerator = -8.0 * (delta * rho - rho * rho * v);
  const double denominator = 4.0 * cubic_drho(p, delta, rho);
  if (std::abs(denominator) < 1e-12 * p.saturation_width_sq()) {
    const double sign = (numerator < 0.0) != (denominator < 0.0) ? -1.0 : 1.0;
    return {sign * std::numeric_limits<double>::infinity(), true};
  }
  return {numerator / denominator, false};
}

std::optional<std::pair<double, double>> spinodal_populations(const SystemParams& p,
                                                              Frequency delta_in) {
  require_same_unit(p.unit(), delta_in.unit, "detuning");
  const double v = p.interaction();
  if (v == 0.0) throw Error(Errc::NonInteracting, "spinodal undefined for V = 0");
  const double delta = delta_in.value;
  const double g2 = p.gamma() * p.gamma();
  const double o2 = p.rabi() * p.rabi();
  const double radicand = 4.0 * delta * delta - 3.0 * g2 - 6.0 * o2;
  if (radicand < 0.0) return std::nullopt;
  const double root = std::abs(v) * std::sqrt(radicand);
  const double denom = 6.0 * v * v;
  const double a = (4.0 * delta * v - root) / denom;
  const double b = (4.0 * delta * v + root) / denom;
  return std::pair{std::min(a, b), std::max(a, b)};
}

std::optional<double> rho_threshold(const SystemParams& p, Frequency delta_in) {
  require_same_unit(p.unit(), delta_in.unit, "detuning");
  const double v = p.interaction();
  if (v == 0.0) throw Error(Errc::NonInteracting, "threshold population needs V != 0");
  const double delta = delta_in.value;
  const double v2 = v * v;
  const double radicand = -3.0 * p.gamma() * p.gamma() * v2 + 4.0 * delta * delta * v2 -
                          6.0 * v2 * p.rabi() * p.rabi();
  if (radicand < 0.0) return std::nullopt;
  return (std::sqrt(radicand) + 4.0 * delta * v) / (6.0 * v2);
}

Frequency critical_detuning(const SystemParams& p, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(Errc::InvalidArgument, "rho must lie in (0, 1)");
  const double value =
      (6.0 * rho * p.interaction() - std::sqrt(3.0) * std::sqrt(p.saturation_width_sq())) / 6.0;
  return p.frequency(value);
}

Slope max_slope(const SystemParams& p, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(Errc::InvalidArgument, "rho must lie in (0, 1)");
  const double denom = p.interaction() + std::sqrt(p.saturation_width_sq() / (3.0 * rho * rho));
  if (denom <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {1.0 / denom, false};
}

OperatingPoint self_consistent_critical_point(const SystemParams& p, double tol,
                                              int max_iterations) {
  if (p.rabi() == 0.0) throw Error(Errc::InvalidArgument, "critical point undefined for Omega = 0");
  const double v = p.interaction();
  // g(rho) = root(delta_c(rho)) - rho is positive near 0 and negative at 1/2 (the
  // population never exceeds 1/2), so Newton steps are safeguarded by a bracket.
  double lo = 1e-15, hi = 0.5;
  double rho = p.rabi() * p.rabi() / p.saturation_width_sq();
  if (!(rho > lo && rho < hi)) rho = 0.25;
  for (int it = 1; it <= max_iterations; ++it) {
    const Frequency dc = critical_detuning(p, rho);
    const SteadyStateSet set = steady_state_roots(p, dc);
    const auto nearest = std::min_element(set.roots.begin(), set.roots.end(), [&](auto& x, auto& y) {
      return std::abs(x.rho - rho) < std::abs(y.rho - rho);
    });
    const double target = nearest->rho;
    const double gap = target - rho;
    if (std::abs(gap) <= tol) return {critical_detuning(p, target), target, it};
    (gap > 0.0 ? lo : hi) = rho;

    // Newton step on g; the root map's derivative is V * slope.
    double next = 0.5 * (lo + hi);
    const Slope s = slope_at(p, dc, target, 1e-6);
    if (!s.divergent) {
      const double denom = 1.0 - v * s.value;
      if (std::abs(denom) > 1e-12) {
        const double newton = rho + gap / denom;
        if (newton > lo && newton < hi) next = newton;
      }
    }
    // Guard against Newton stalling on one side of the bracket.
    if (it % 8 == 0) next = 0.5 * (lo + hi);
    rho = next;
  }
  throw Error(Errc::NoConvergence, "self-consistent critical point did not converge");
}

Enhancement enhancement_ratio(const SystemParams& interacting, const SystemParams& free_in) {
  require_same_unit(interacting.unit(), free_in.unit(), "free-particle parameters");
  if (free_in.interaction() != 0.0)
    throw Error(Errc::InvalidArgument, "reference parameters must have V = 0");
  const double tol = 1e-12 * std::max(interacting.rabi(), interacting.gamma());
  if (std::abs(interacting.rabi() - free_in.rabi()) > tol ||
      std::abs(interacting.gamma() - free_in.gamma()) > tol) {
    throw Error(Errc::InvalidArgument, "interacting and free parameters must share Omega, Gamma");
  }
  if (bistable_interval(interacting)) return {kSaturatedBeta, true};
  const OperatingPoint op_i = self_consistent_critical_point(interacting);
  const OperatingPoint op_f = self_consistent_critical_point(free_in);
  const Slope s_i = max_slope(interacting, op_i.rho);
  const Slope s_f = max_slope(free_in, op_f.rho);
  if (s_i.divergent) return {kSaturatedBeta, true};
  return {s_i.value / s_f.value, false};
}

double critical_interaction(const SystemParams& p) {
  if (p.rabi() == 0.0) return std::numeric_limits<double>::infinity();
  const double b = p.saturation_width_sq();
  return 4.0 * b * std::sqrt(b) / (3.0 * std::sqrt(3.0) * p.rabi() * p.rabi());
}

std::optional<Interval> bistable_interval(const SystemParams& p) {
  const double v = p.interaction();
  if (v == 0.0 || p.rabi() == 0.0) return std::nullopt;
  if (std::abs(v) <= critical_interaction(p)) return std::nullopt;

  const double sign = v < 0.0 ? -1.0 : 1.0;
  const double b = p.saturation_width_sq();
  const double rho_star = 0.75 * p.rabi() * p.rabi() / b;
  // Rising-edge critical detuning (mirrored for V > 0) sits on the middle branch.
  const double inner = sign * (std::abs(v) * rho_star + std::sqrt(b / 12.0));
  const double near_edge =
      sign * 0.5 * std::sqrt(3.0 * p.gamma() * p.gamma() + 6.0 * p.rabi() * p.rabi());
  const double far_edge = sign * (3.0 * std::abs(v) * p.rabi() * p.rabi() / b) * (1.0 + 1e-9) +
                          sign * 1e-9 * p.gamma();
  if (root_count(p, inner) != 3) return std::nullopt;

  auto bisect = [&](double in, double out) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (in + out);
      if (mid == in || mid == out) break;
      (root_count(p, mid) == 3 ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  const double e1 = bisect(inner, near_edge);
  const double e2 = bisect(inner, far_edge);
  return Interval{std::min(e1, e2), std::max(e1, e2)};
}

CriticalitySummary criticality(const SystemParams& p) {
  CriticalitySummary out;
  out.bistable_interval = bistable_interval(p);
  if (out.bistable_interval) {
    // Past the critical interaction the edge is the fold where a sweep starting
    // on the far-detuned branch jumps: the lower branch's end for V < 0.
    const bool attractive = p.interaction() < 0.0;
    const double fold = attractive ? out.bistable_interval->hi : out.bistable_interval->lo;
    out.delta_c = p.frequency(fold);
    // The fold population is the spinodal that is also a root (a double root).
    const auto spin = spinodal_populations(p, out.delta_c);
    out.rho_at_max = 0.75 * p.rabi() * p.rabi() / p.saturation_width_sq();
    if (spin) {
      out.rho_at_max = std::abs(cubic_value(p, fold, spin->first)) <=
                               std::abs(cubic_value(p, fold, spin->second))
                           ? spin->first
                           : spin->second;
    }
    const double inf = std::numeric_limits<double>::infinity();
    out.max_slope = {attractive ? inf : -inf, true};
    out.rho_threshold = rho_threshold(p, out.delta_c);
    out.beta = {kSaturatedBeta, true};
    return out;
  }
  const OperatingPoint op = self_consistent_critical_point(p);
  out.delta_c = op.delta_c;
  out.rho_at_max = op.rho;
  out.max_slope = max_slope(p, op.rho);
  if (p.interaction() != 0.0) out.rho_threshold = rho_threshold(p, op.delta_c);
  out.beta = enhancement_ratio(p, p.with_interaction(0.0));
  return out;
}

BranchPolicy parse_branch_policy(std::string_view name) {
  if (name == "lower") return BranchPolicy::Lower;
  if (name == "upper") return BranchPolicy::Upper;
  if (name == "sweep_up") return BranchPolicy::SweepUp;
  if (name == "sweep_down") return BranchPolicy::SweepDown;
  throw Error(Errc::UnknownPolicy, "unknown branch policy '" + std::string(name) + "'");
}

std::string_view to_string(BranchPolicy policy) {
  switch (policy) {
    case BranchPolicy::Lower: return "lower";
    case BranchPolicy::Upper: return "upper";
    case BranchPolicy::SweepUp: return "sweep_up";
    case BranchPolicy::SweepDown: return "sweep_down";
  }
  return "?";
}

std::vector<SpectrumPoint> spectrum(const SystemParams& p, std::span<const double> grid,
                                    FreqUnit grid_unit, BranchPolicy policy) {
  require_same_unit(p.unit(), grid_unit, "detuning grid");
  const std::size_t n = grid.size();
  const bool increasing = n < 2 || grid[1] > grid[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (increasing ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1]))
      throw Error(Errc::InvalidArgument, "detuning grid must be strictly monotone");
  }

  std::vector<SpectrumPoint> out(n);
  if (policy == BranchPolicy::Lower || policy == BranchPolicy::Upper) {
    const auto rho = kernels::steady_state_branch_omp(
        p, grid, policy == BranchPolicy::Lower ? kernels::Branch::Lower : kernels::Branch::Upper);
    for (std::size_t i = 0; i < n; ++i) out[i] = {grid[i], rho[i]};
    return out;
  }

  // Visit points in the sweep direction and follow the branch continuously.
  const bool up = policy == BranchPolicy::SweepUp;
  const bool forward = up == increasing;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = forward ? k : n - 1 - k;
    const SteadyStateSet set = steady_state_roots(p, p.frequency(grid[i]));
    double rho;
    if (set.roots.size() == 1) {
      rho = set.roots.front().rho;
    } else if (std::isnan(previous)) {
      rho = up ? set.roots.front().rho : set.roots.back().rho;
    } else {
      rho = std::abs(set.roots.front().rho - previous) <= std::abs(set.roots.back().rho - previous)
                ? set.roots.front().rho
                : set.roots.back().rho;
    }
    previous = rho;
    out[i] = {grid[i], rho};
  }
  return out;
}

std::optional<double> full_width_half_max(std::span<const SpectrumPoint> curve) {
  if (curve.size() < 3) return std::nullopt;
  const auto peak = std::max_element(curve.begin(), curve.end(),
                                     [](auto& a, auto& b) { return a.rho < b.rho; });
  const double half = 0.5 * peak->rho;
  const std::size_t ip = static_cast<std::size_t>(peak - curve.begin());
  auto cross = [&](std::size_t i, std::size_t j) {
    const double t = (half - curve[i].rho) / (curve[j].rho - curve[i].rho);
    return curve[i].detuning + t * (curve[j].detuning - curve[i].detuning);
  };
  std::optional<double> left, right;
  for (std::size_t i = ip; i > 0; --i) {
    if (curve[i - 1].rho <= half) {
      left = cross(i - 1, i);
      break;
    }
  }
  for (std::size_t i = ip; i + 1 < curve.size(); ++i) {
    if (curve[i + 1].rho <= half) {
      right = cross(i, i + 1);
      break;
    }
  }
  if (!left || !right) return std::nullopt;
  return std::abs(*right - *left);
}

}  // namespace rydcrit::meanfield
