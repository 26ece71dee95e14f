#include <omp.h>

#include "kernel_items.hpp"

namespace rydcrit::kernels {

std::vector<double> steady_state_branch_omp(const SystemParams& p, std::span<const double> grid,
                                            Branch branch) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<double> out(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::branch_root(p, grid[i], branch);
  return out;
}

std::vector<std::vector<double>> sample_difference_omp(std::span<const BeamMoments> bins,
                                                       detector::CountModel model,
                                                       int samples_per_bin, std::uint64_t seed,
                                                       std::uint64_t stream) {
  const auto n = static_cast<std::ptrdiff_t>(bins.size());
  std::vector<std::vector<double>> out(bins.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    rng::Stream s(rng::substream_seed(seed, stream, static_cast<std::uint64_t>(i)));
    out[i].resize(static_cast<std::size_t>(samples_per_bin));
    for (auto& x : out[i]) x = detail::draw_difference(s, bins[i], model);
  }
  return out;
}

std::vector<double> ml_shift_estimates_omp(const ShiftLikelihoodTable& table,
                                           detector::CountModel model, int trials,
                                           std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(trials));
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t k = 0; k < n; ++k)
    out[k] = detail::ml_shift_trial(table, model, seed, static_cast<std::size_t>(k));
  return out;
}

}  // namespace rydcrit::kernels
