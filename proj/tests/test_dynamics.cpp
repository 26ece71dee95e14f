#include "doctest.h"
#include "oracles.hpp"

#include <chrono>
#include <random>

#include "rydcrit/dynamics.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/meanfield.hpp"

using namespace rydcrit;
namespace dy = rydcrit::dynamics;
namespace mf = rydcrit::meanfield;

namespace {

constexpr double kMHz = kRadPerSecondPerTwoPiMHz;

oracle::Model rad_model(const SystemParams& p) {
  const auto r = p.in(FreqUnit::RadPerSecond);
  return {r.rabi(), r.gamma(), r.interaction()};
}

Eigen::Vector3d vec(const dy::BlochState& s) {
  return {s.coherence.real(), s.coherence.imag(), s.population};
}

const SystemParams kBistable = SystemParams::from_2pi_mhz(2.872727272727273, 5.0, -35.7);

}  // namespace

TEST_CASE("Bloch right-hand side matches the hand-written equations") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const auto p = kBistable.in(FreqUnit::RadPerSecond);
  for (int k = 0; k < 50; ++k) {
    dy::BlochState s{{u(gen), u(gen)}, 0.5 + u(gen), 0.0};
    const double d = 10.0 * u(gen) * kMHz;
    const auto lib = dy::bloch_rhs(s, p, rad_s(d));
    const auto ref = oracle::bloch(rad_model(p), d, vec(s));
    const double scale = p.gamma();
    CHECK(std::abs(lib.coherence.real() - ref(0)) <= 1e-12 * scale);
    CHECK(std::abs(lib.coherence.imag() - ref(1)) <= 1e-12 * scale);
    CHECK(std::abs(lib.population - ref(2)) <= 1e-12 * scale);
    // The literal convention doubles the population coupling.
    const auto lit = dy::bloch_rhs(s, p, rad_s(d), dy::RabiConvention::Literal);
    CHECK(lit.population - lib.population == doctest::Approx(-p.rabi() * s.coherence.imag()));
  }
  CHECK_THROWS_AS(dy::bloch_rhs({}, kBistable, rad_s(0.0)), Error);
}

TEST_CASE("stationary states of every cubic root are fixed points of the Bloch flow") {
  const auto p = kBistable;
  for (double d : {-12.0, -7.1, -6.9, -3.0, 2.0}) {
    for (const auto& r : mf::steady_state_roots(p, mhz2pi(d)).roots) {
      const auto s = dy::stationary_state(p, mhz2pi(d), r.rho);
      const auto ref = oracle::stationary(rad_model(p), d * kMHz, r.rho);
      CHECK(vec(s).isApprox(ref, 1e-12));
      CHECK(dy::bloch_rhs(s, p, mhz2pi(d)).norm() <= 1e-9 * p.gamma());
    }
  }
}

TEST_CASE("linearization classifies the steady states like the cubic") {
  const auto m = rad_model(kBistable);
  for (double d : {-7.4, -7.1, -6.8, -12.0, -2.0}) {
    for (const auto& r : mf::steady_state_roots(kBistable, mhz2pi(d)).roots) {
      const auto ev = oracle::linear_spectrum(m, d * kMHz, r.rho);
      const double top = ev.real().maxCoeff();
      if (r.stable) {
        CHECK(top < 0.0);
      } else {
        CHECK(top > 0.0);
      }
    }
  }
}

TEST_CASE("free evolution matches the exact linear solution") {
  const auto p = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  const auto m = rad_model(p);
  const dy::BlochState s0{{0.0, 0.0}, 0.0, 0.0};
  for (double d : {-3.0, 0.0, 1.7}) {
    for (double t : {0.05e-6, 0.3e-6, 2e-6}) {
      const auto lib = dy::evolve(p, mhz2pi(d), s0, t);
      const auto ref = oracle::free_bloch_exact(m, d * kMHz, vec(s0), t);
      CHECK((vec(lib) - ref).norm() <= 1e-8);
      CHECK(lib.time == doctest::Approx(t));
    }
  }
}

TEST_CASE("integrator fixed points coincide with stable roots") {
  const double d = -7.1;
  const auto roots = mf::steady_state_roots(kBistable, mhz2pi(d)).roots;
  REQUIRE(roots.size() == 3);
  for (const auto& r : roots) {
    if (!r.stable) continue;
    auto s = dy::stationary_state(kBistable, mhz2pi(d), r.rho + (r.rho < 0.05 ? 0.01 : -0.01));
    s = dy::evolve(kBistable, mhz2pi(d), s, 40e-6);
    CHECK(std::abs(s.population - r.rho) <= 1e-6);
  }
  // The unstable root repels: a small kick leaves it.
  auto s = dy::stationary_state(kBistable, mhz2pi(d), roots[1].rho + 1e-4);
  s = dy::evolve(kBistable, mhz2pi(d), s, 40e-6);
  CHECK(std::abs(s.population - roots[2].rho) <= 1e-6);
}

TEST_CASE("relaxation time follows the slowest linear mode and slows near criticality") {
  const auto free = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  const double k = mf::critical_interaction(free);
  double previous = 0.0;
  for (double f : {0.0, 0.5, 0.8, 0.9, 0.95}) {
    const auto p = free.with_interaction(-f * k);
    const auto op = mf::self_consistent_critical_point(p);
    const double tau = dy::relaxation_time(p, op.delta_c, 1e-4);
    const auto ev = oracle::linear_spectrum(rad_model(p), op.delta_c.value * kMHz, op.rho);
    const double slow = 1.0 / std::abs(ev.real().maxCoeff());
    CHECK(tau > 0.3 * slow);
    CHECK(tau < 1.5 * slow);
    CHECK(tau > previous);
    previous = tau;
  }
  CHECK_THROWS_AS(dy::relaxation_time(free, mhz2pi(0.0), 0.0), Error);
}

TEST_CASE("sweep protocol bookkeeping") {
  const auto pr = dy::SweepProtocol::from_bins(mhz2pi(-5.0), mhz2pi(5.0), 100, 1e-6);
  CHECK(pr.direction() == 1.0);
  CHECK(pr.bin_step() == doctest::Approx(0.1 * kMHz));
  CHECK(pr.bin_center(0) == doctest::Approx(-4.95 * kMHz));
  CHECK(pr.detuning_at(pr.duration()) == doctest::Approx(5.0 * kMHz));
  const auto rv = pr.reversed();
  CHECK(rv.direction() == -1.0);
  CHECK(rv.bin_center(0) == doctest::Approx(4.95 * kMHz));
  auto bad = pr;
  bad.rate *= 1.1;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(dy::SweepProtocol::from_bins(mhz2pi(0.0), mhz2pi(1.0), 1, 1e-6).validate(), Error);
  CHECK_THROWS_AS(dy::SweepProtocol::from_bins(mhz2pi(0.0), mhz2pi(0.0), 10, 1e-6).validate(), Error);
}

TEST_CASE("slow free sweep follows the Lorentzian") {
  const auto p = SystemParams::from_2pi_mhz(2.0, 5.0, 0.0);
  const auto pr = dy::SweepProtocol::from_bins(mhz2pi(-8.0), mhz2pi(8.0), 200, 20e-6);
  const auto tr = dy::integrate_sweep(p, pr);
  REQUIRE(tr.bin_mean_rho.size() == 200);
  REQUIRE(tr.samples.size() == 201);
  const auto m = rad_model(p);
  for (std::size_t i = 0; i < 200; ++i) {
    const double ss = oracle::lorentzian<double>(m, tr.bin_centers[i], 0.0);
    CHECK(std::abs(tr.bin_mean_rho[i] - ss) <= 2e-4);
  }
  CHECK(tr.stats.max_population_excess <= 1e-9);
  CHECK(tr.stats.max_coherence <= 0.5);
}

TEST_CASE("stepwise schedule equals chained evolution") {
  const auto p = kBistable;
  const std::vector<double> d{-8.0 * kMHz, -7.5 * kMHz, -7.0 * kMHz};
  const auto s0 = dy::stationary_state(p, mhz2pi(-8.0), mf::steady_state_roots(p, mhz2pi(-8.0)).roots.front().rho);
  const auto tr = dy::integrate_schedule(p, d, 1e-6, s0);
  auto s = s0;
  for (double x : d) s = dy::evolve(p, rad_s(x), s, 1e-6);
  CHECK(std::abs(tr.samples.back().state.population - s.population) <= 1e-8);
  CHECK_THROWS_AS(dy::integrate_schedule(p, std::vector<double>{}, 1e-6, s0), Error);
}

TEST_CASE("hysteresis loop opens only with bistability and each sweep stays fast") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto loop = dy::hysteresis_loop(kBistable, mhz2pi(-10.0), mhz2pi(-4.0), 200, 50e-6);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs / 2.0 <= 1.0);
  CHECK(loop.area > 0.05);
  const auto iv = *mf::bistable_interval(kBistable);
  CHECK(loop.jump_up == doctest::Approx(iv.hi).epsilon(0.03));
  CHECK(loop.jump_down == doctest::Approx(iv.lo).epsilon(0.03));
  const auto flat = dy::hysteresis_loop(kBistable.with_interaction(0.0), mhz2pi(-10.0), mhz2pi(-4.0), 200, 50e-6);
  CHECK(flat.area < 1e-4);
}

TEST_CASE("unphysical initial states are rejected") {
  dy::BlochState s{{0.0, 0.0}, 1.5, 0.0};
  CHECK_THROWS_AS(dy::evolve(kBistable, mhz2pi(0.0), s, 1e-6), Error);
}
