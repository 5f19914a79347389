#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qew/analysis.hpp"
#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/perturbation.hpp"
#include "qew/propagator.hpp"

using namespace qew;
namespace k = qew::constants;

namespace {

double distance(const Wavefunction& a, const Wavefunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) s += std::norm(a.samples[i] - b.samples[i]);
  return std::sqrt(s * a.grid.dz());
}

Wavefunction stepped(const Wavefunction& psi, const LaserField& laser, const Kinematics& kin,
                     double total, std::size_t n) {
  auto p = psi;
  const double dt = total / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) p = step(p, laser, kin, static_cast<double>(i) * dt, dt);
  return p;
}

}  // namespace

TEST_CASE("potential: zero field, classical force, detuned phase drift, window") {
  const auto kin = kinematics_from_beta(0.7);
  auto laser = make_laser(1.2e-6 / 0.7, 1e5, 30e-6, 0.0, kin);
  const std::vector<double> zeta{-1e-9, 0.0, 1e-9};

  auto zero = laser;
  zero.E0 = 0.0;
  for (double v : effective_potential(zero, kin, zeta, 1e-15)) CHECK(v == 0.0);

  const auto V = effective_potential(laser, kin, zeta, 0.0);
  const double force = -(V[2] - V[0]) / 2e-9;
  CHECK(-force == doctest::Approx(k::e * laser.E0).epsilon(1e-6));

  const auto det = make_laser(laser.lambda, laser.E0, laser.L, 0.0, kin, k::pi);
  const double rate = det.q_z * kin.v0 - det.omega();
  const double amp = k::e * kin.v0 * det.E0 / det.omega();
  const std::vector<double> origin{0.0};
  for (double t : {0.0, 1e-14, 5e-14}) {
    CHECK(effective_potential(det, kin, origin, t)[0] == doctest::Approx(amp * std::sin(rate * t)));
  }
  const double T = laser.interaction_time(kin);
  CHECK(effective_potential(laser, kin, origin, -1e-18)[0] == 0.0);
  CHECK(effective_potential(laser, kin, origin, T * 1.001)[0] == 0.0);
}

TEST_CASE("laser geometry and coupling") {
  const auto kin = kinematics_from_beta(0.7);
  const auto sync = make_laser(1.714e-6, 1e4, 30e-6, 0.0, kin);
  CHECK(std::abs(sync.theta_bar(kin)) < 1e-9);
  const auto det = make_laser(1.714e-6, 1e4, 30e-6, 0.0, kin, 2.0);
  CHECK(det.theta_bar(kin) == doctest::Approx(2.0));
  const double omega = sync.omega();
  CHECK(coupling_upsilon(field_for_upsilon(0.1, 30e-6, omega), 30e-6, omega) == doctest::Approx(0.1));
}

TEST_CASE("scenario validation") {
  const auto sc = test::scenario(test::beam(0.04e-6), 1.2e-6, 0.1, 4096);
  const auto kin = kinematics_from_beta(0.7);
  CHECK_NOTHROW(sc.validate(kin));
  auto bad = sc;
  bad.dt = 2.0 * 2.0 * k::pi / sc.laser.omega() / 64.0;
  CHECK_THROWS_AS(bad.validate(kin), ConfigurationError);
  bad = sc;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(kin), ConfigurationError);
  bad = sc;
  bad.snapshots = {-1e-15};
  CHECK_THROWS_AS(bad.validate(kin), ConfigurationError);
  CHECK(default_dt(sc.laser) == doctest::Approx(2.0 * k::pi / sc.laser.omega() / 256.0));
}

TEST_CASE("step: zero field reduces to drift") {
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(test::beam(0.04e-6), 1.2e-6, 0.0, 4096);
  const auto psi = gaussian_waist(sc.beam, sc.grid, kin);
  CHECK(fidelity(step(psi, sc.laser, kin, 0.0, sc.dt), drift(psi, sc.dt, kin)) > 1.0 - 1e-12);
}

TEST_CASE("step: unitarity over 1e4 steps") {
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(test::beam(0.4e-6), 0.2e-6, 0.5, 1024);
  auto psi = gaussian_waist(sc.beam, sc.grid, kin);
  const auto one = step(psi, sc.laser, kin, 0.0, sc.dt);
  CHECK(std::abs(one.norm() - 1.0) < 1e-12);
  for (int i = 0; i < 10000; ++i) psi = step(psi, sc.laser, kin, i * sc.dt, sc.dt);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-8);
}

TEST_CASE("step: second-order convergence") {
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(test::beam(0.4e-6), 0.2e-6, 10.0, 1024);
  sc.laser.phi0 = 0.3;
  const auto psi = gaussian_waist(sc.beam, sc.grid, kin);
  const double total = 4.0 * 2.0 * k::pi / sc.laser.omega();
  const auto ref = stepped(psi, sc.laser, kin, total, 4096);
  const double e1 = distance(stepped(psi, sc.laser, kin, total, 256), ref);
  const double e2 = distance(stepped(psi, sc.laser, kin, total, 512), ref);
  CHECK(e1 > 1e-12);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("run_interaction: fused steps agree with repeated step calls") {
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(test::beam(0.4e-6), 0.2e-6, 0.3, 1024, 0.5e-6);
  const auto psi = gaussian_waist(sc.beam, sc.grid, kin);
  const auto res = run_interaction(psi, sc, kin);
  const auto manual = stepped(psi, sc.laser, kin, sc.laser.interaction_time(kin), res.steps);
  CHECK(distance(res.final_state, manual) < 1e-10);
  CHECK(res.final_state.t_elapsed == doctest::Approx(sc.laser.interaction_time(kin)));
}

TEST_CASE("run_interaction: zero field equals drift over the window") {
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(test::beam(0.04e-6, 0.1), 1.2e-6, 0.0, 8192);
  const auto psi = prepare_entrance(sc.beam, sc.grid, kin);
  const auto res = run_interaction(psi, sc, kin);
  CHECK(fidelity(res.final_state, drift(psi, sc.laser.interaction_time(kin), kin)) > 1.0 - 1e-10);
}

TEST_CASE("run_interaction: snapshots at requested times") {
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(test::beam(0.4e-6), 0.2e-6, 0.1, 1024, 1e-6);
  const double T = sc.laser.interaction_time(kin);
  sc.snapshots = {0.0, 0.5 * T, T};
  const auto res = run_interaction(gaussian_waist(sc.beam, sc.grid, kin), sc, kin);
  REQUIRE(res.snapshots.size() == 3);
  CHECK(res.snapshots[0].t_elapsed == doctest::Approx(0.0));
  CHECK(res.snapshots[1].t_elapsed == doctest::Approx(0.5 * T).epsilon(1e-2));
  CHECK(fidelity(res.snapshots[2], res.final_state) > 1.0 - 1e-12);
}

TEST_CASE("acceleration regime: shift follows the point-particle law") {
  const auto kin = kinematics_from_beta(0.7);
  for (double phi : {0.0, k::pi / 2.0}) {
    auto sc = test::scenario(test::beam(0.04e-6, 0.0, phi), 1.2e-6, 0.1);
    const auto entrance = prepare_entrance(sc.beam, sc.grid, kin);
    const auto res = run_interaction(entrance, sc, kin);
    const double shift = mean_shift(momentum_spectrum(res.final_state), momentum_spectrum(entrance));
    const auto th = first_order_theory(sc.beam, sc.laser, kin);
    const double scale = k::e * sc.laser.E0 * sc.laser.L / kin.v0;
    CAPTURE(phi);
    CHECK(std::abs(shift - th.dp_mean) < 0.03 * scale);
    if (phi != 0.0) CHECK(std::abs(shift) < 0.05 * scale);
    CHECK(std::abs(res.final_state.norm() - 1.0) < 1e-8);
  }
}

TEST_CASE("first-order shift is odd under phi0 -> phi0 + pi") {
  const auto kin = kinematics_from_beta(0.7);
  double s[2];
  for (int i = 0; i < 2; ++i) {
    auto sc = test::scenario(test::beam(0.04e-6, 0.0, k::pi / 4.0 + i * k::pi), 1.2e-6, 0.05);
    const auto entrance = prepare_entrance(sc.beam, sc.grid, kin);
    s[i] = mean_shift(momentum_spectrum(run_interaction(entrance, sc, kin).final_state),
                      momentum_spectrum(entrance));
  }
  CHECK(std::abs(s[0] + s[1]) < 1e-3 * std::abs(s[0]));
}

TEST_CASE("perturbative limit: sideband population over upsilon^2 tends to one") {
  const auto kin = kinematics_from_beta(0.7);
  double previous = 0.0;
  for (double ups : {0.02, 0.05, 0.1}) {
    auto sc = test::scenario(test::beam(0.4e-6), 0.2e-6, ups, 2048);
    const auto spec = momentum_spectrum(simulate(sc, kin).final_state);
    const auto w = sideband_weights(spec, photon_scale(sc.laser.lambda, kin).recoil, 2,
                                    sc.beam.sigma_p0());
    const double dev = std::abs(0.5 * (w.at(1) + w.at(-1)) / (ups * ups) - 1.0);
    CAPTURE(ups);
    CHECK(dev < 0.02);
    CHECK(dev >= previous);
    previous = dev;
  }
}
