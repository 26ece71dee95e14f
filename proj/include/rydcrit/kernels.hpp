#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// variant; both produce bit-identical results for identical inputs.

#include <cstdint>
#include <span>
#include <vector>

#include "rydcrit/detector.hpp"
#include "rydcrit/system_params.hpp"

namespace rydcrit::kernels {

enum class Branch { Lower, Upper };

// Lowest or highest stable steady state at each grid detuning (params' unit).
std::vector<double> steady_state_branch_serial(const SystemParams& p, std::span<const double> grid,
                                               Branch branch);
std::vector<double> steady_state_branch_omp(const SystemParams& p, std::span<const double> grid,
                                            Branch branch);

struct BeamMoments {
  double probe_mean = 0.0;
  double reference_mean = 0.0;
  double floor_variance = 0.0;  // electronic noise, counts^2
};

// samples_per_bin draws of (probe - reference) for each bin.
std::vector<std::vector<double>> sample_difference_serial(std::span<const BeamMoments> bins,
                                                          detector::CountModel model,
                                                          int samples_per_bin, std::uint64_t seed,
                                                          std::uint64_t stream);
std::vector<std::vector<double>> sample_difference_omp(std::span<const BeamMoments> bins,
                                                       detector::CountModel model,
                                                       int samples_per_bin, std::uint64_t seed,
                                                       std::uint64_t stream);

// Gaussian-likelihood shift estimation. For every candidate shift j the table
// holds the mean and variance of each bin; the truth is `truth` (a row index).
struct ShiftLikelihoodTable {
  std::vector<double> shifts;                 // candidate grid, ascending, uniform
  std::vector<std::vector<double>> means;     // [shift][bin]
  std::vector<std::vector<double>> variances; // [shift][bin]
  std::vector<BeamMoments> truth;             // per-bin beam moments at the true shift
};

// Maximum-likelihood shift estimate for each trial (grid argmax + parabola).
std::vector<double> ml_shift_estimates_serial(const ShiftLikelihoodTable& table,
                                              detector::CountModel model, int trials,
                                              std::uint64_t seed);
std::vector<double> ml_shift_estimates_omp(const ShiftLikelihoodTable& table,
                                           detector::CountModel model, int trials,
                                           std::uint64_t seed);

}  // namespace rydcrit::kernels
