#include "rydcrit/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rydcrit {

namespace {

struct Depressed {
  double q;  // (a^2 - 3b) / 9
  double r;  // (2a^3 - 9ab + 27c) / 54
};

Depressed depress(double a, double b, double c) {
  return {(a * a - 3.0 * b) / 9.0, (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0};
}

}  // namespace

double monic_cubic_discriminant(double a, double b, double c) {
  const auto [q, r] = depress(a, b, c);
  return q * q * q - r * r;
}

CubicRoots solve_monic_cubic(double a, double b, double c) {
  CubicRoots out;
  const auto [q, r] = depress(a, b, c);
  const double shift = a / 3.0;
  const double q3 = q * q * q;
  if (r * r < q3) {
    const double sq = std::sqrt(q);
    const double theta = std::acos(std::clamp(r / (sq * q), -1.0, 1.0));
    constexpr double two_pi = 2.0 * std::numbers::pi;
    out.x[0] = -2.0 * sq * std::cos(theta / 3.0) - shift;
    out.x[1] = -2.0 * sq * std::cos((theta + two_pi) / 3.0) - shift;
    out.x[2] = -2.0 * sq * std::cos((theta - two_pi) / 3.0) - shift;
    out.count = 3;
    std::sort(out.x.begin(), out.x.end());
    return out;
  }
  const double big = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
  const double small = big != 0.0 ? q / big : 0.0;
  out.x[0] = big + small - shift;
  out.count = 1;
  return out;
}

}  // namespace rydcrit
