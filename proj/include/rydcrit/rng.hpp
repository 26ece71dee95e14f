#pragma once

#include <cstdint>
#include <random>

namespace rydcrit::rng {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based seed for substream (stream, index) of a root seed. Lets bins
// and Monte-Carlo trials be sampled in any order with identical results.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Above this mean a Poisson draw is replaced by a moment-matched Gaussian.
inline constexpr double kPoissonGaussianSwitch = 1e12;

// mt19937_64 is fully specified by the standard; the distributions below are
// implemented here so sampled values do not depend on the standard library vendor.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // open interval (0, 1)
  double normal();   // standard normal, Marsaglia polar method
  double poisson(double mean);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rydcrit::rng
