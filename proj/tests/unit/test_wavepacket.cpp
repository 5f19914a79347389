#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/wavepacket.hpp"

using namespace qew;
namespace k = qew::constants;

namespace {

GridSpec grid_for(const BeamParams& b, double t_D, const Kinematics& kin) {
  GridSpec g;
  g.N = 1024;
  g.z_span = 32.0 * analytic_sigma_z(b.sigma_z0, t_D, kin);
  while (g.dz() > b.sigma_z0 / 8.0) g.N *= 2;
  return g;
}

}  // namespace

TEST_CASE("waist: minimal uncertainty and momentum width") {
  const auto kin = kinematics_from_beta(0.7);
  const auto b = test::beam(0.4e-6);
  const auto psi = gaussian_waist(b, grid_for(b, 0.0, kin), kin);
  const auto m = moments(psi);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  CHECK(m.sigma_p == doctest::Approx(1.318e-28).epsilon(1e-3));
  CHECK(test::rel(m.sigma_p, b.sigma_p0()) < 1e-9);
  CHECK(test::rel(m.sigma_z, b.sigma_z0) < 1e-9);
  CHECK(test::rel(m.area, k::h / 2.0) < 1e-6);
  CHECK(std::abs(m.cov_zp) < 1e-9 * m.sigma_z * m.sigma_p);
  CHECK(std::abs(m.mean_z) < 1e-6 * m.sigma_z);
  CHECK(test::rel(m.mean_p, kin.p0) < 1e-15);
}

TEST_CASE("waist: temporal and energy widths") {
  const auto kin = kinematics_from_beta(0.7);
  const auto b = test::beam(0.04e-6);
  CHECK(b.sigma_t0(kin) == doctest::Approx(0.19e-15).epsilon(0.01));
  CHECK(test::rel(b.sigma_E0(kin) * b.sigma_t0(kin), k::hbar / 2.0) < 1e-12);
}

TEST_CASE("waist: grid bounds are named") {
  const auto kin = kinematics_from_beta(0.7);
  const auto b = test::beam(0.04e-6);
  GridSpec coarse{1024, 20e-6};
  try {
    (void)gaussian_waist(b, coarse, kin);
    FAIL("coarse grid accepted");
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).find("dz") != std::string::npos);
  }
  GridSpec narrow{1024, 0.5e-6};
  try {
    (void)gaussian_waist(b, narrow, kin);
    FAIL("narrow grid accepted");
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).find("z_span") != std::string::npos);
  }
  CHECK_THROWS_AS(GridSpec({1000, 1e-6}).validate(), ConfigurationError);
  CHECK_THROWS_AS(GridSpec({1024, 0.0}).validate(), ConfigurationError);
}

TEST_CASE("drift law: caption values") {
  const auto kin = kinematics_from_beta(0.7);
  const double s60 = analytic_sigma_z(0.04e-6, 0.6 / kin.v0, kin);
  CHECK(s60 == doctest::Approx(1.50e-6).epsilon(0.005));
  CHECK(analytic_sigma_z(0.06e-6, 0.6 / kin.v0, kin) == doctest::Approx(1.006e-6).epsilon(0.002));
  CHECK(analytic_sigma_z(0.4e-6, 0.0, kin) == 0.4e-6);
  CHECK(analytic_sigma_z(0.04e-6, -0.3 / kin.v0, kin) == analytic_sigma_z(0.04e-6, 0.3 / kin.v0, kin));
}

TEST_CASE("drift: numerical width follows the analytic curve") {
  const auto kin = kinematics_from_beta(0.7);
  for (double s0 : {0.02e-6, 0.04e-6, 0.1e-6, 0.4e-6, 1.0e-6}) {
    for (double L_D : {0.0, 0.3, 0.6, 1.0}) {
      const auto b = test::beam(s0);
      const double t = L_D / kin.v0;
      const auto g = grid_for(b, t, kin);
      const auto out = drift(gaussian_waist(b, g, kin), t, kin);
      const auto m = moments(out);
      CAPTURE(s0);
      CAPTURE(L_D);
      CHECK(test::rel(m.sigma_z, analytic_sigma_z(s0, t, kin)) < 0.005);
    }
  }
}

TEST_CASE("drift: 60 cm stretches 0.04 um to 1.50 um") {
  const auto kin = kinematics_from_beta(0.7);
  const auto b = test::beam(0.04e-6, 0.6);
  const auto g = default_grid(b, kin, 1.2e-6);
  const auto m = moments(drift(gaussian_waist(b, g, kin), b.drift_time(kin), kin));
  CHECK(m.sigma_z == doctest::Approx(1.50e-6).epsilon(0.005));
}

TEST_CASE("drift: invariants") {
  const auto kin = kinematics_from_beta(0.7);
  const auto b = test::beam(0.04e-6);
  const double t = 0.2 / kin.v0;
  const auto g = grid_for(b, 2.0 * t, kin);
  const auto psi = gaussian_waist(b, g, kin);
  const auto m0 = moments(psi);

  SUBCASE("identity at zero time") { CHECK(fidelity(drift(psi, 0.0, kin), psi) > 1.0 - 1e-14); }
  SUBCASE("norm, momentum width, area, chirp") {
    const auto out = drift(psi, t, kin);
    const auto m = moments(out);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
    CHECK(test::rel(m.sigma_p, m0.sigma_p) < 1e-9);
    CHECK(test::rel(m.area, m0.area) < 1e-6);
    CHECK(m.cov_zp > 0.0);
    CHECK(moments(drift(psi, -t, kin)).cov_zp < 0.0);
    CHECK(out.t_elapsed == doctest::Approx(t));
  }
  SUBCASE("group property") {
    const auto ab = drift(drift(psi, 0.7 * t, kin), 1.3 * t, kin);
    CHECK(fidelity(ab, drift(psi, 2.0 * t, kin)) > 1.0 - 1e-10);
    CHECK(fidelity(drift(drift(psi, t, kin), -t, kin), psi) > 1.0 - 1e-10);
  }
  SUBCASE("momentum density is drift invariant") {
    const auto a = momentum_density(psi);
    const auto c = momentum_density(drift(psi, t, kin));
    CHECK(test::l1(a, c, g.dp()) < 1e-10);
  }
}

TEST_CASE("drift: wrap-around is refused") {
  const auto kin = kinematics_from_beta(0.7);
  const auto b = test::beam(0.04e-6);
  const auto g = grid_for(b, 0.0, kin);
  CHECK_THROWS_AS(drift(gaussian_waist(b, g, kin), 1.0 / kin.v0, kin), AliasingError);
}

TEST_CASE("momentum transform round trip") {
  const auto kin = kinematics_from_beta(0.7);
  const auto b = test::beam(0.1e-6);
  const auto g = grid_for(b, 0.0, kin);
  const auto psi = drift(gaussian_waist(b, g, kin), 0.05 / kin.v0, kin);
  auto back = psi;
  from_momentum(to_momentum(psi), back);
  CHECK(fidelity(back, psi) > 1.0 - 1e-14);
  double s = 0.0;
  for (double v : momentum_density(psi)) s += v;
  CHECK(std::abs(s * g.dp() - 1.0) < 1e-12);
  CHECK(momentum_edge_probability(psi) < 1e-12);
  CHECK(position_edge_probability(psi) < 1e-12);
}
