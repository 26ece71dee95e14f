#pragma once

#include <array>
#include <span>

#include "json.hpp"

namespace rydcrit::fits {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double residual_norm = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares y = intercept + slope x. InsufficientBins below 2 points,
// DegenerateSpread when all x coincide.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// F = A (t / t0)^lambda, fitted by equal-weight OLS on (ln t, ln F).
struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double t0 = 1e-6;
  double residual_norm = 0.0;
  std::array<double, 4> covariance{};  // row-major over (ln A, lambda)
};

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> f, double t0 = 1e-6);

// y = chi |(Delta - center) / delta0|^(-alpha), fitted on log residuals.
struct SusceptibilityFit {
  double chi = 0.0;
  double exponent = 0.0;
  double center = 0.0;
  double delta0 = 1.0;
  double residual_norm = 0.0;
  int iterations = 0;
};

struct SusceptibilityOptions {
  double delta0 = 1.0;
  int center_grid = 4001;
  int max_iterations = 200;
  double tol = 1e-14;
};

SusceptibilityFit fit_susceptibility(std::span<const double> delta, std::span<const double> y,
                                     const SusceptibilityOptions& options = {});

nlohmann::ordered_json to_json(const PowerLawFit& fit);
nlohmann::ordered_json to_json(const SusceptibilityFit& fit);
nlohmann::ordered_json to_json(const LinearFit& fit);

}  // namespace rydcrit::fits
