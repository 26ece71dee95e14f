#pragma once

// Reference computations that share no code with the library. They work from
// the population fixed-point equation, the S-curve inverse or the Bloch
// equations written out by hand, and are deliberately brute force.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace oracle {

using quad = boost::multiprecision::cpp_bin_float_quad;

struct Model {
  double rabi;
  double gamma;
  double v;
};

// Right side of rho = (Omega^2/4) / ((Delta - V rho)^2 + Omega^2/2 + Gamma^2/4).
template <class T>
T lorentzian(const Model& m, T delta, T rho) {
  const T de = delta - T(m.v) * rho;
  const T o2 = T(m.rabi) * T(m.rabi);
  return (o2 / 4) / (de * de + o2 / 2 + T(m.gamma) * T(m.gamma) / 4);
}

// Roots of rho - L(rho) on [0, 1/2]: sign changes on an n-point grid, then bisection.
inline std::vector<double> fixed_point_roots(const Model& m, double delta, int n = 1'000'000) {
  std::vector<double> roots;
  auto g = [&](long double r) { return lorentzian<long double>(m, delta, r) - r; };
  const long double step = 0.5L / n;
  long double a = 0.0L, ga = g(a);
  for (int i = 1; i <= n; ++i) {
    const long double b = step * i, gb = g(b);
    if (ga == 0.0L) {
      roots.push_back(static_cast<double>(a));
    } else if ((ga > 0.0L) != (gb > 0.0L) && gb != 0.0L) {
      long double lo = a, hi = b, glo = ga;
      for (int k = 0; k < 80; ++k) {
        const long double mid = 0.5L * (lo + hi), gm = g(mid);
        if ((gm > 0.0L) == (glo > 0.0L)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(static_cast<double>(0.5L * (lo + hi)));
    }
    a = b;
    ga = gb;
  }
  return roots;
}

// Polishes a root of rho - L(rho) in quad precision (Newton with numeric derivative).
inline quad polish_root(const Model& m, quad delta, quad rho) {
  const quad eps("1e-20");
  for (int k = 0; k < 60; ++k) {
    const quad g = lorentzian<quad>(m, delta, rho) - rho;
    const quad gp = (lorentzian<quad>(m, delta, rho + eps) - lorentzian<quad>(m, delta, rho - eps)) /
                        (2 * eps) -
                    1;
    const quad next = rho - g / gp;
    if (abs(next - rho) < quad("1e-32")) return next;
    rho = next;
  }
  return rho;
}

// Branch-following central difference d rho / d Delta, in quad precision.
inline double fd_slope(const Model& m, double delta, double rho, double h = 1e-12) {
  const quad d(delta), hq(h);
  const quad r0 = polish_root(m, d, quad(rho));
  const quad up = polish_root(m, d + hq, r0);
  const quad dn = polish_root(m, d - hq, r0);
  return static_cast<double>((up - dn) / (2 * hq));
}

// d f / d rho of f = rho ((Delta - V rho)^2 + Omega^2/2 + Gamma^2/4) - Omega^2/4,
// written out from the product rule.
inline long double dfdrho(const Model& m, long double delta, long double rho) {
  const long double de = delta - m.v * rho;
  return de * de + m.rabi * m.rabi / 2.0L + m.gamma * m.gamma / 4.0L - 2.0L * m.v * rho * de;
}

// Zeros of d f / d rho on a grid over [0, 1/2], ascending.
inline std::vector<double> spinodal_scan(const Model& m, double delta, int n = 1'000'000) {
  std::vector<double> out;
  auto g = [&](long double r) { return dfdrho(m, delta, r); };
  const long double step = 0.5L / n;
  long double a = 0.0L, ga = g(a);
  for (int i = 1; i <= n; ++i) {
    const long double b = step * i, gb = g(b);
    if ((ga > 0.0L) != (gb > 0.0L)) {
      long double lo = a, hi = b;
      for (int k = 0; k < 80; ++k) {
        const long double mid = 0.5L * (lo + hi);
        ((g(mid) > 0.0L) == (g(lo) > 0.0L) ? lo : hi) = mid;
      }
      out.push_back(static_cast<double>(0.5L * (lo + hi)));
    }
    a = b;
    ga = gb;
  }
  return out;
}

// Bistable interval from the S-curve inverse Delta(rho) = V rho +- sqrt(Omega^2/rho - B)/2:
// the folds are the interior extrema of the two branches.
inline std::optional<std::pair<double, double>> bistable_scan(const Model& m, int n = 1'000'000) {
  const long double b = m.gamma * m.gamma + 2.0L * m.rabi * m.rabi;
  const long double rho_max = m.rabi * m.rabi / b;  // radicand vanishes here
  std::vector<long double> extrema;
  for (int sgn : {-1, 1}) {
    auto d = [&](long double r) {
      return m.v * r + sgn * 0.5L * std::sqrt(std::max(0.0L, m.rabi * m.rabi / r - b));
    };
    const long double step = rho_max / n;
    for (int i = 2; i < n - 1; ++i) {
      const long double x0 = step * (i - 1), x1 = step * i, x2 = step * (i + 1);
      const long double d0 = d(x0), d1 = d(x1), d2 = d(x2);
      if ((d1 - d0) * (d2 - d1) < 0.0L) {
        // Parabolic vertex through the three samples.
        const long double den = d0 - 2.0L * d1 + d2;
        extrema.push_back(den != 0.0L ? d1 - 0.125L * (d2 - d0) * (d2 - d0) / den : d1);
      }
    }
  }
  if (extrema.size() < 2) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(extrema.begin(), extrema.end());
  return std::pair{static_cast<double>(*lo), static_cast<double>(*hi)};
}

// Bloch equations in real coordinates X = (x, y, p), x + i y = rho_gr:
//   x' = -De y - G x / 2,  y' = (O/2)(2p - 1) + De x - G y / 2,  p' = -O y - G p,
// with De = Delta - V p.
inline Eigen::Vector3d bloch(const Model& m, double delta, const Eigen::Vector3d& s) {
  const double de = delta - m.v * s(2);
  return {-de * s(1) - 0.5 * m.gamma * s(0),
          0.5 * m.rabi * (2.0 * s(2) - 1.0) + de * s(0) - 0.5 * m.gamma * s(1),
          -m.rabi * s(1) - m.gamma * s(2)};
}

inline Eigen::Matrix3d bloch_jacobian(const Model& m, double delta, const Eigen::Vector3d& s) {
  const double de = delta - m.v * s(2);
  Eigen::Matrix3d j;
  j << -0.5 * m.gamma, -de, m.v * s(1),
      de, -0.5 * m.gamma, m.rabi - m.v * s(0),
      0.0, -m.rabi, -m.gamma;
  return j;
}

// Stationary coherence for population rho.
inline Eigen::Vector3d stationary(const Model& m, double delta, double rho) {
  const double de = delta - m.v * rho;
  const double w = 2.0 * rho - 1.0;
  const double d = m.gamma * m.gamma / 4.0 + de * de;
  return {-0.5 * m.rabi * w * de / d, 0.5 * m.rabi * w * 0.5 * m.gamma / d, rho};
}

// Eigenvalues of the linearization at a fixed point.
inline Eigen::Vector3cd linear_spectrum(const Model& m, double delta, double rho) {
  return bloch_jacobian(m, delta, stationary(m, delta, rho)).eigenvalues();
}

// Exact solution of the V = 0 Bloch equations, X' = A X + c, by eigendecomposition.
inline Eigen::Vector3d free_bloch_exact(const Model& m, double delta, const Eigen::Vector3d& x0,
                                        double t) {
  Eigen::Matrix3d a;
  a << -0.5 * m.gamma, -delta, 0.0,
      delta, -0.5 * m.gamma, m.rabi,
      0.0, -m.rabi, -m.gamma;
  const Eigen::Vector3d c(0.0, -0.5 * m.rabi, 0.0);
  const Eigen::Vector3d xs = a.partialPivLu().solve(-c);
  Eigen::EigenSolver<Eigen::Matrix3d> es(a);
  const Eigen::Matrix3cd vecs = es.eigenvectors();
  const Eigen::Vector3cd coeff = vecs.partialPivLu().solve((x0 - xs).cast<std::complex<double>>());
  Eigen::Vector3cd evolved = Eigen::Vector3cd::Zero();
  for (int k = 0; k < 3; ++k) evolved += vecs.col(k) * coeff(k) * std::exp(es.eigenvalues()(k) * t);
  return xs + evolved.real();
}

// Dressed-state shift: the level that connects to the bare Rydberg state, from
// the 2x2 Hamiltonian [[0, Omega/2], [Omega/2, -Delta_mw]].
inline double dressed_shift(double rabi_mw, double mw_detuning) {
  Eigen::Matrix2d h;
  h << 0.0, 0.5 * rabi_mw, 0.5 * rabi_mw, -mw_detuning;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  return es.eigenvalues().maxCoeff();
}

}  // namespace oracle
