#include "rydcrit/rng.hpp"

#include <cmath>

namespace rydcrit::rng {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

double Stream::uniform() {
  constexpr double kInv53 = 1.0 / 9007199254740992.0;
  return (static_cast<double>(engine_() >> 11) + 0.5) * kInv53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double Stream::poisson(double mean) {
  if (!(mean > 0.0)) return 0.0;
  if (mean > kPoissonGaussianSwitch) return mean + std::sqrt(mean) * normal();
  if (mean < 10.0) {
    // Sequential inversion.
    double k = 0.0;
    double term = std::exp(-mean);
    double cdf = term;
    const double u = uniform();
    while (u > cdf && term > 0.0) {
      k += 1.0;
      term *= mean / k;
      cdf += term;
    }
    return k;
  }
  // Transformed rejection with squeeze (Hormann's PTRS).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return k;
    }
  }
}

}  // namespace rydcrit::rng
