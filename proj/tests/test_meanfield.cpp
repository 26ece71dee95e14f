#include "doctest.h"
#include "oracles.hpp"

#include <random>

#include "rydcrit/cubic.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/meanfield.hpp"

using namespace rydcrit;
namespace mf = rydcrit::meanfield;

namespace {

oracle::Model model_of(const SystemParams& p) { return {p.rabi(), p.gamma(), p.interaction()}; }

std::vector<double> rhos(const mf::SteadyStateSet& s) {
  std::vector<double> out;
  for (const auto& r : s.roots) out.push_back(r.rho);
  return out;
}

}  // namespace

TEST_CASE("monic cubic solver against known roots") {
  // (x - 1)(x - 2)(x - 3)
  auto r = solve_monic_cubic(-6.0, 11.0, -6.0);
  REQUIRE(r.count == 3);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.x[2] == doctest::Approx(3.0).epsilon(1e-12));
  // (x - 2)(x^2 + 1)
  r = solve_monic_cubic(-2.0, 1.0, -2.0);
  REQUIRE(r.count == 1);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(monic_cubic_discriminant(-6.0, 11.0, -6.0) > 0.0);
  CHECK(monic_cubic_discriminant(-2.0, 1.0, -2.0) < 0.0);
}

TEST_CASE("V = 0 reduces to the Lorentzian") {
  const auto p = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  for (double d : {-10.0, -1.0, 0.0, 3.5}) {
    const auto s = mf::steady_state_roots(p, mhz2pi(d));
    REQUIRE(s.roots.size() == 1);
    CHECK(s.roots[0].rho == doctest::Approx(oracle::lorentzian<double>(model_of(p), d, 0.0)).epsilon(1e-14));
  }
}

TEST_CASE("Omega = 0 short circuit") {
  const auto p = SystemParams::from_2pi_mhz(0.0, 5.0, -10.0);
  const auto s = mf::steady_state_roots(p, mhz2pi(1.0));
  CHECK(s.degenerate);
  REQUIRE(s.roots.size() == 1);
  CHECK(s.roots[0].rho == 0.0);
}

TEST_CASE("roots match a fixed-point scan of the population equation") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int three = 0;
  for (int k = 0; k < 40; ++k) {
    const auto p = SystemParams::from_2pi_mhz(0.5 + 4.5 * u(gen), 0.5 + 5.5 * u(gen), -60.0 + 120.0 * u(gen));
    double d = -30.0 + 60.0 * u(gen);
    if (k % 3 == 0) {
      if (auto iv = mf::bistable_interval(p)) d = iv->lo + u(gen) * iv->width();
    }
    const auto lib = rhos(mf::steady_state_roots(p, mhz2pi(d)));
    const auto ref = oracle::fixed_point_roots(model_of(p), d, 200'000);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t i = 0; i < lib.size(); ++i) CHECK(std::abs(lib[i] - ref[i]) <= 1e-5);
    three += lib.size() == 3;
  }
  CHECK(three > 0);
}

TEST_CASE("stability flags mark only the middle of three roots unstable") {
  const auto p = SystemParams::from_2pi_mhz(2.872727272727273, 5.0, -35.7);
  const auto s = mf::steady_state_roots(p, mhz2pi(-7.1));
  REQUIRE(s.roots.size() == 3);
  CHECK(s.roots[0].stable);
  CHECK_FALSE(s.roots[1].stable);
  CHECK(s.roots[2].stable);
}

TEST_CASE("unit mismatch is rejected") {
  const auto p = SystemParams::from_2pi_mhz(2.0, 5.0, -10.0);
  CHECK_THROWS_AS(mf::steady_state_roots(p, rad_s(1.0)), Error);
}

TEST_CASE("closed-form slope matches quad-precision branch differences") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const auto p = SystemParams::from_2pi_mhz(0.5 + 4.5 * u(gen), 0.5 + 5.5 * u(gen), -60.0 + 120.0 * u(gen));
    const double d = -30.0 + 60.0 * u(gen);
    const auto s = mf::steady_state_roots(p, mhz2pi(d));
    for (const auto& r : s.roots) {
      if (std::abs(4.0 * mf::cubic_drho(p, d, r.rho)) <= 1e-6) continue;
      const auto lib = mf::slope_at(p, mhz2pi(d), r.rho);
      REQUIRE_FALSE(lib.divergent);
      const double ref = oracle::fd_slope(model_of(p), d, r.rho);
      CHECK(std::abs(lib.value - ref) <= 1e-5 * std::abs(ref) + 1e-14);
      ++checked;
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("slope_at rejects points off the manifold") {
  const auto p = SystemParams::from_2pi_mhz(2.0, 5.0, -10.0);
  CHECK_THROWS_AS(mf::slope_at(p, mhz2pi(0.0), 0.3), Error);
}

TEST_CASE("spinodal populations match a grid scan of df/drho") {
  const auto p = SystemParams::from_2pi_mhz(2.872727272727273, 5.0, -35.7);
  for (double d : {-7.2, -9.0, -15.0}) {
    const auto lib = mf::spinodal_populations(p, mhz2pi(d));
    const auto ref = oracle::spinodal_scan(model_of(p), d);
    REQUIRE(lib);
    REQUIRE(ref.size() == 2);
    CHECK(lib->first == doctest::Approx(ref[0]).epsilon(1e-9));
    CHECK(lib->second == doctest::Approx(ref[1]).epsilon(1e-9));
    CHECK(*mf::rho_threshold(p, mhz2pi(d)) == doctest::Approx(ref[1]).epsilon(1e-9));
  }
  // Close to resonance df/drho has no zero.
  CHECK_FALSE(mf::spinodal_populations(p, mhz2pi(-1.0)));
  CHECK(oracle::spinodal_scan(model_of(p), -1.0).empty());
  CHECK_THROWS_AS(mf::spinodal_populations(p.with_interaction(0.0), mhz2pi(-7.0)), Error);
}

TEST_CASE("critical detuning and maximum slope match a branch scan") {
  for (double v : {0.0, -10.0, -30.0, 20.0}) {
    const auto p = SystemParams::from_2pi_mhz(2.0, 5.0, v);
    const auto op = mf::self_consistent_critical_point(p);
    const double rho_star = 0.75 * 4.0 / p.saturation_width_sq();
    CHECK(op.rho == doctest::Approx(rho_star).epsilon(1e-8));

    // Numeric derivative maximum over the branch; rising edge sits on the V side.
    double best = 0.0, at = 0.0;
    const double lo = v <= 0.0 ? -12.0 + 0.2 * v : 0.0;
    const double hi = v <= 0.0 ? 0.0 : 12.0 + 0.2 * v;
    for (int i = 0; i <= 20000; ++i) {
      const double d = lo + (hi - lo) * i / 20000.0;
      const double r = mf::steady_state_roots(p, mhz2pi(d)).roots.front().rho;
      const double s = std::abs(oracle::fd_slope(model_of(p), d, r));
      if (s > best) {
        best = s;
        at = d;
      }
    }
    if (v > 0.0) continue;  // the closed form describes the red-side edge
    CHECK(op.delta_c.value == doctest::Approx(at).epsilon(2.0 * (hi - lo) / 20000.0 / std::abs(at)));
    CHECK(mf::max_slope(p, op.rho).value == doctest::Approx(best).epsilon(1e-4));
  }
}

TEST_CASE("critical interaction and the bistable interval") {
  const auto p = SystemParams::from_2pi_mhz(2.0, 1.0, -50.0);
  const auto iv = mf::bistable_interval(p);
  REQUIRE(iv);
  CHECK(iv->lo == doctest::Approx(-22.2476).epsilon(1e-5));
  CHECK(iv->hi == doctest::Approx(-6.7108).epsilon(1e-5));
  const auto ref = oracle::bistable_scan({2.0, 1.0, -50.0});
  REQUIRE(ref);
  CHECK(iv->lo == doctest::Approx(ref->first).epsilon(1e-7));
  CHECK(iv->hi == doctest::Approx(ref->second).epsilon(1e-7));

  const auto q = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  const double k = mf::critical_interaction(q);
  CHECK(k == doctest::Approx(4.0 * std::pow(33.0, 1.5) / (3.0 * std::sqrt(3.0) * 4.0)).epsilon(1e-14));
  CHECK_FALSE(mf::bistable_interval(q.with_interaction(-0.99 * k)));
  CHECK(mf::bistable_interval(q.with_interaction(-1.01 * k)));
  CHECK(mf::bistable_interval(q.with_interaction(1.01 * k)));
  CHECK_FALSE(oracle::bistable_scan({2.0, 5.0, -0.99 * k}));
  CHECK(oracle::bistable_scan({2.0, 5.0, -1.01 * k}));
}

TEST_CASE("calibrated bistable interval") {
  const auto p = SystemParams::from_2pi_mhz(2.872727272727273, 5.0, -35.7);
  const auto iv = mf::bistable_interval(p);
  REQUIRE(iv);
  const auto ref = oracle::bistable_scan(model_of(p));
  CHECK(iv->lo == doctest::Approx(ref->first).epsilon(1e-7));
  CHECK(iv->hi == doctest::Approx(ref->second).epsilon(1e-7));
  const auto c = mf::criticality(p);
  CHECK(c.beta.saturated);
  CHECK(c.max_slope.divergent);
  CHECK(c.delta_c.value == iv->hi);
  // The fold population is a double root: root and spinodal at once.
  CHECK(std::abs(mf::cubic_value(p, iv->hi, c.rho_at_max)) < 1e-8);
}

TEST_CASE("beta grows with |V| below the critical interaction") {
  const auto free = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  const double k = mf::critical_interaction(free);
  double previous = 1.0;
  for (double f : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.978}) {
    const auto e = mf::enhancement_ratio(free.with_interaction(-f * k), free);
    REQUIRE_FALSE(e.saturated);
    CHECK(e.beta > previous);
    // beta = K / (K - |V|) for attractive V.
    CHECK(e.beta == doctest::Approx(1.0 / (1.0 - f)).epsilon(1e-8));
    previous = e.beta;
  }
  CHECK(mf::enhancement_ratio(free.with_interaction(-35.7), free).beta >= 10.0);
  CHECK(mf::enhancement_ratio(free.with_interaction(-1.1 * k), free).saturated);
  CHECK_THROWS_AS(mf::enhancement_ratio(free.with_interaction(-10.0), free.with_interaction(-1.0)), Error);
}

TEST_CASE("sweep branch policies and FWHM") {
  const auto p = SystemParams::from_2pi_mhz(2.872727272727273, 5.0, -35.7);
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(-10.0 + 0.02 * i);
  const auto up = mf::spectrum(p, grid, FreqUnit::TwoPiMHz, mf::BranchPolicy::SweepUp);
  const auto down = mf::spectrum(p, grid, FreqUnit::TwoPiMHz, mf::BranchPolicy::SweepDown);
  double area = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) area += std::abs(up[i].rho - down[i].rho) * 0.02;
  CHECK(area > 0.01);
  CHECK(up[0].rho == down[0].rho);

  const auto free = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  std::vector<double> g2;
  for (int i = 0; i <= 20000; ++i) g2.push_back(-10.0 + 0.001 * i);
  const auto lin = mf::spectrum(free, g2, FreqUnit::TwoPiMHz, mf::BranchPolicy::Lower);
  CHECK(*mf::full_width_half_max(lin) == doctest::Approx(std::sqrt(33.0)).epsilon(1e-5));
  CHECK(mf::parse_branch_policy("sweep_down") == mf::BranchPolicy::SweepDown);
  CHECK_THROWS_AS(mf::parse_branch_policy("sideways"), Error);
  std::vector<double> bad{0.0, 1.0, 0.5};
  CHECK_THROWS_AS(mf::spectrum(free, bad, FreqUnit::TwoPiMHz, mf::BranchPolicy::Lower), Error);
}
