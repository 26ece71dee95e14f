#pragma once

#include <array>
#include <cstddef>

namespace rydcrit {

// Real roots of x^3 + a x^2 + b x + c = 0, ascending. Closed form
// (trigonometric for three real roots, Cardano otherwise); no polishing.
struct CubicRoots {
  std::array<double, 3> x{};
  std::size_t count = 0;
};

CubicRoots solve_monic_cubic(double a, double b, double c);

// Sign-only discriminant test: > 0 means three distinct real roots.
double monic_cubic_discriminant(double a, double b, double c);

}  // namespace rydcrit
