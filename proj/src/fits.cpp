#include "rydcrit/fits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rydcrit/error.hpp"

namespace rydcrit::fits {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::InvalidArgument, "x and y sizes differ");
  const std::size_t n = x.size();
  if (n < 2) throw Error(Errc::InsufficientBins, "linear fit needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(Errc::DegenerateSpread, "all abscissae coincide");
  LinearFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ssr += r * r;
  }
  fit.residual_norm = std::sqrt(ssr);
  if (n > 2) {
    const double s2 = ssr / static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
  }
  return fit;
}

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> f, double t0) {
  if (t.size() != f.size()) throw Error(Errc::InvalidArgument, "t and F sizes differ");
  if (t.size() < 3) throw Error(Errc::InsufficientBins, "power-law fit needs at least 3 points");
  if (!(t0 > 0.0)) throw Error(Errc::InvalidArgument, "t0 must be positive");
  std::vector<double> lx(t.size()), ly(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(f[i] > 0.0))
      throw Error(Errc::InvalidArgument, "power-law fit needs positive t and F");
    lx[i] = std::log(t[i] / t0);
    ly[i] = std::log(f[i]);
  }
  const LinearFit lin = linear_fit(lx, ly);
  PowerLawFit fit;
  fit.t0 = t0;
  fit.amplitude = std::exp(lin.intercept);
  fit.exponent = lin.slope;
  fit.residual_norm = lin.residual_norm;

  const double n = static_cast<double>(t.size());
  double sx = 0.0, sxx = 0.0;
  for (double v : lx) {
    sx += v;
    sxx += v * v;
  }
  const double det = n * sxx - sx * sx;
  const double s2 = lin.residual_norm * lin.residual_norm / (n - 2.0);
  fit.covariance = {s2 * sxx / det, -s2 * sx / det, -s2 * sx / det, s2 * n / det};
  return fit;
}

namespace {

struct LogModel {
  std::span<const double> delta;
  std::span<const double> logy;
  double log_delta0;

  double ssr(double log_chi, double alpha, double center) const {
    double s = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      const double r = residual(i, log_chi, alpha, center);
      s += r * r;
    }
    return s;
  }

  double residual(std::size_t i, double log_chi, double alpha, double center) const {
    return logy[i] - log_chi + alpha * (std::log(std::abs(delta[i] - center)) - log_delta0);
  }
};

bool same_side(std::span<const double> delta, double c0, double c1) {
  for (double d : delta)
    if ((d - c0 > 0.0) != (d - c1 > 0.0) || d == c1) return false;
  return true;
}

}  // namespace

SusceptibilityFit fit_susceptibility(std::span<const double> delta, std::span<const double> y,
                                     const SusceptibilityOptions& options) {
  if (delta.size() != y.size()) throw Error(Errc::InvalidArgument, "delta and y sizes differ");
  const std::size_t n = delta.size();
  if (n < 5) throw Error(Errc::InsufficientBins, "susceptibility fit needs at least 5 points");
  if (!(options.delta0 > 0.0)) throw Error(Errc::InvalidArgument, "delta0 must be positive");
  std::vector<double> logy(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[i] > 0.0)) throw Error(Errc::InvalidArgument, "susceptibility data must be positive");
    logy[i] = std::log(y[i]);
  }
  const auto [mn, mx] = std::minmax_element(delta.begin(), delta.end());
  const double span = *mx - *mn;
  if (!(span > 0.0)) throw Error(Errc::DegenerateSpread, "all detunings coincide");

  const LogModel model{delta, logy, std::log(options.delta0)};

  // Grid search over the center, each candidate closed by log-log regression.
  double best_ssr = std::numeric_limits<double>::infinity();
  double c = 0.0, log_chi = 0.0, alpha = 0.0;
  const int m = std::max(options.center_grid, 3);
  std::vector<double> lx(n);
  for (int k = 0; k < m; ++k) {
    const double cand = *mn - span + 3.0 * span * k / (m - 1);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const double u = std::abs(delta[i] - cand);
      if (u <= 1e-12 * span) ok = false;
      lx[i] = std::log(u) - model.log_delta0;
    }
    if (!ok) continue;
    const LinearFit lin = linear_fit(lx, logy);
    const double ssr = lin.residual_norm * lin.residual_norm;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      c = cand;
      log_chi = lin.intercept;
      alpha = -lin.slope;
    }
  }

  // Levenberg-Marquardt on (ln chi, alpha, center).
  double lambda = 1e-3;
  double ssr = model.ssr(log_chi, alpha, c);
  int it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double u = delta[i] - c;
      const Eigen::Vector3d g(-1.0, std::log(std::abs(u)) - model.log_delta0, -alpha / u);
      const double r = model.residual(i, log_chi, alpha, c);
      jtj += g * g.transpose();
      jtr += g * r;
    }
    if (ssr <= 1e-28 || jtr.norm() <= 1e-15 * (1.0 + std::sqrt(ssr))) {
      converged = true;
      break;
    }
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      Eigen::Matrix3d a = jtj;
      for (int d = 0; d < 3; ++d) a(d, d) += lambda * std::max(jtj(d, d), 1e-300);
      const Eigen::Vector3d step = a.ldlt().solve(-jtr);
      const double nc = c + step(2);
      if (!step.allFinite() || !same_side(delta, c, nc)) {
        lambda *= 4.0;
        continue;
      }
      const double trial = model.ssr(log_chi + step(0), alpha + step(1), nc);
      if (trial < ssr) {
        const double rel = (ssr - trial) / std::max(ssr, 1e-300);
        log_chi += step(0);
        alpha += step(1);
        c = nc;
        ssr = trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (rel < options.tol) converged = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted || converged) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(Errc::NoConvergence, "susceptibility fit did not converge");

  SusceptibilityFit fit;
  fit.chi = std::exp(log_chi);
  fit.exponent = alpha;
  fit.center = c;
  fit.delta0 = options.delta0;
  fit.residual_norm = std::sqrt(ssr);
  fit.iterations = it;
  return fit;
}

nlohmann::ordered_json to_json(const LinearFit& fit) {
  nlohmann::ordered_json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["slope_stderr"] = fit.slope_stderr;
  j["intercept_stderr"] = fit.intercept_stderr;
  j["residual_norm"] = fit.residual_norm;
  j["n"] = fit.n;
  return j;
}

nlohmann::ordered_json to_json(const PowerLawFit& fit) {
  nlohmann::ordered_json j;
  j["amplitude"] = fit.amplitude;
  j["exponent"] = fit.exponent;
  j["t0_s"] = fit.t0;
  j["residual_norm"] = fit.residual_norm;
  j["covariance_logA_lambda"] = fit.covariance;
  return j;
}

nlohmann::ordered_json to_json(const SusceptibilityFit& fit) {
  nlohmann::ordered_json j;
  j["chi"] = fit.chi;
  j["exponent"] = fit.exponent;
  j["center"] = fit.center;
  j["delta0"] = fit.delta0;
  j["residual_norm"] = fit.residual_norm;
  j["iterations"] = fit.iterations;
  return j;
}

}  // namespace rydcrit::fits
