#include <benchmark/benchmark.h>

#include <vector>

#include "rydcrit/kernels.hpp"
#include "rydcrit/system_params.hpp"

namespace {

using namespace rydcrit;

std::vector<double> grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = -15.0 + 20.0 * static_cast<double>(i) / (n - 1);
  return g;
}

void BM_BranchSerial(benchmark::State& st) {
  const auto p = SystemParams::from_2pi_mhz(2.8727, 5.0, -35.7);
  const auto g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::steady_state_branch_serial(p, g, kernels::Branch::Lower));
}

void BM_BranchOmp(benchmark::State& st) {
  const auto p = SystemParams::from_2pi_mhz(2.8727, 5.0, -35.7);
  const auto g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::steady_state_branch_omp(p, g, kernels::Branch::Lower));
}

std::vector<kernels::BeamMoments> beams(std::size_t n) {
  return std::vector<kernels::BeamMoments>(n, {4.2e9, 4.1e9, 0.0});
}

void BM_SampleSerial(benchmark::State& st) {
  const auto b = beams(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::sample_difference_serial(b, detector::CountModel::Poisson, 16, 1, 0));
}

void BM_SampleOmp(benchmark::State& st) {
  const auto b = beams(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::sample_difference_omp(b, detector::CountModel::Poisson, 16, 1, 0));
}

kernels::ShiftLikelihoodTable table() {
  kernels::ShiftLikelihoodTable t;
  const std::size_t bins = 64, shifts = 121;
  for (std::size_t j = 0; j < shifts; ++j) {
    t.shifts.push_back(-1.0 + 2.0 * static_cast<double>(j) / (shifts - 1));
    std::vector<double> m(bins), v(bins, 2e8);
    for (std::size_t i = 0; i < bins; ++i) m[i] = 1e5 * (static_cast<double>(i) + t.shifts.back());
    t.means.push_back(m);
    t.variances.push_back(v);
  }
  for (std::size_t i = 0; i < bins; ++i) t.truth.push_back({1e8 + 1e5 * i, 1e8, 0.0});
  return t;
}

void BM_MlSerial(benchmark::State& st) {
  const auto t = table();
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::ml_shift_estimates_serial(t, detector::CountModel::Gaussian,
                                                                static_cast<int>(st.range(0)), 3));
}

void BM_MlOmp(benchmark::State& st) {
  const auto t = table();
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::ml_shift_estimates_omp(t, detector::CountModel::Gaussian,
                                                             static_cast<int>(st.range(0)), 3));
}

}  // namespace

BENCHMARK(BM_BranchSerial)->Arg(10000);
BENCHMARK(BM_BranchOmp)->Arg(10000);
BENCHMARK(BM_SampleSerial)->Arg(4096);
BENCHMARK(BM_SampleOmp)->Arg(4096);
BENCHMARK(BM_MlSerial)->Arg(1000);
BENCHMARK(BM_MlOmp)->Arg(1000);

BENCHMARK_MAIN();
