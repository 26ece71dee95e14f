#pragma once

// Per-item bodies shared by the serial and OpenMP kernel loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "rydcrit/kernels.hpp"
#include "rydcrit/meanfield.hpp"
#include "rydcrit/rng.hpp"

namespace rydcrit::kernels::detail {

inline double branch_root(const SystemParams& p, double delta, Branch branch) {
  const auto set = meanfield::steady_state_roots(p, p.frequency(delta));
  return branch == Branch::Lower ? set.roots.front().rho : set.roots.back().rho;
}

inline double draw_difference(rng::Stream& s, const BeamMoments& m, detector::CountModel model) {
  double diff;
  if (model == detector::CountModel::Poisson) {
    diff = s.poisson(m.probe_mean) - s.poisson(m.reference_mean);
  } else {
    const double a = m.probe_mean + std::sqrt(m.probe_mean) * s.normal();
    const double b = m.reference_mean + std::sqrt(m.reference_mean) * s.normal();
    diff = a - b;
  }
  if (m.floor_variance > 0.0) diff += std::sqrt(m.floor_variance) * s.normal();
  return diff;
}

// Stream tag separating Monte-Carlo trials from scan sampling.
inline constexpr std::uint64_t kTrialStream = 0x4d43'5452'4941'4c53ULL;

inline double ml_shift_trial(const ShiftLikelihoodTable& t, detector::CountModel model,
                             std::uint64_t seed, std::size_t trial) {
  rng::Stream s(rng::substream_seed(seed, kTrialStream, trial));
  const std::size_t nbins = t.truth.size();
  double obs_buf[512];
  std::vector<double> obs_heap;
  double* obs = obs_buf;
  if (nbins > 512) {
    obs_heap.resize(nbins);
    obs = obs_heap.data();
  }
  for (std::size_t i = 0; i < nbins; ++i) obs[i] = draw_difference(s, t.truth[i], model);

  const std::size_t ns = t.shifts.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  std::vector<double> ll(ns);
  for (std::size_t j = 0; j < ns; ++j) {
    double acc = 0.0;
    const auto& mu = t.means[j];
    const auto& var = t.variances[j];
    for (std::size_t i = 0; i < nbins; ++i) {
      const double r = obs[i] - mu[i];
      acc -= 0.5 * (std::log(var[i]) + r * r / var[i]);
    }
    ll[j] = acc;
    if (acc > best) {
      best = acc;
      arg = j;
    }
  }
  if (arg == 0 || arg + 1 == ns) return t.shifts[arg];
  // Vertex of the parabola through the three points around the grid maximum.
  const double h = t.shifts[arg + 1] - t.shifts[arg];
  const double ym = ll[arg - 1], y0 = ll[arg], yp = ll[arg + 1];
  const double curv = ym - 2.0 * y0 + yp;
  if (!(curv < 0.0)) return t.shifts[arg];
  return t.shifts[arg] + 0.5 * h * (ym - yp) / curv;
}

}  // namespace rydcrit::kernels::detail
