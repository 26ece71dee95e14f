#include "kernel_items.hpp"

namespace rydcrit::kernels {

std::vector<double> steady_state_branch_serial(const SystemParams& p, std::span<const double> grid,
                                               Branch branch) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = detail::branch_root(p, grid[i], branch);
  return out;
}

std::vector<std::vector<double>> sample_difference_serial(std::span<const BeamMoments> bins,
                                                          detector::CountModel model,
                                                          int samples_per_bin, std::uint64_t seed,
                                                          std::uint64_t stream) {
  std::vector<std::vector<double>> out(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    rng::Stream s(rng::substream_seed(seed, stream, i));
    out[i].resize(static_cast<std::size_t>(samples_per_bin));
    for (auto& x : out[i]) x = detail::draw_difference(s, bins[i], model);
  }
  return out;
}

std::vector<double> ml_shift_estimates_serial(const ShiftLikelihoodTable& table,
                                              detector::CountModel model, int trials,
                                              std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(trials));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = detail::ml_shift_trial(table, model, seed, k);
  return out;
}

}  // namespace rydcrit::kernels
