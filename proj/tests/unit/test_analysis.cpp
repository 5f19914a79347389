#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qew/analysis.hpp"
#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/parallel.hpp"
#include "qew/perturbation.hpp"
#include "qew/wigner.hpp"

using namespace qew;
namespace k = qew::constants;

namespace {

Spectrum synthetic(double sigma, double period, double depth, double shift = 0.0) {
  Spectrum s;
  const std::size_t n = 8192;
  const double dp = 8.0 * sigma / n * 2.0;
  s.p0 = 1e-22;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) - n / 2.0) * dp;
    s.p_axis.push_back(s.p0 + p);
    const double x = p - shift;
    const double mod = period > 0.0 ? 1.0 + depth * std::cos(2.0 * k::pi * x / period) : 1.0;
    s.density.push_back(std::exp(-x * x / (2.0 * sigma * sigma)) * mod);
    total += s.density.back() * dp;
  }
  for (auto& v : s.density) v /= total;
  return s;
}

Scenario small_scenario(double upsilon, double L_D = 0.0) {
  return test::scenario(test::beam(0.04e-6, L_D), 1.2e-6, upsilon, 4096);
}

}  // namespace

TEST_CASE("momentum spectrum of a waist") {
  const auto kin = kinematics_from_beta(0.7);
  const auto sc = small_scenario(0.0);
  const auto psi = gaussian_waist(sc.beam, sc.grid, kin);
  const auto s = momentum_spectrum(psi);
  CHECK(std::abs(s.integral() - 1.0) < 1e-8);
  CHECK(test::rel(s.stddev(), sc.beam.sigma_p0()) < 1e-9);
  CHECK(test::rel(s.mean(), kin.p0) < 1e-15);
  for (double v : s.density) CHECK(v >= 0.0);
  CHECK_FALSE(s.fingerprint.empty());
  const auto w = wigner(psi);
  CHECK(test::l1(marginal_p(w), s.density, s.dp()) < 1e-8);
}

TEST_CASE("momentum spectrum is drift invariant") {
  const auto kin = kinematics_from_beta(0.7);
  const auto sc = small_scenario(0.0);
  const auto psi = gaussian_waist(sc.beam, sc.grid, kin);
  const auto a = momentum_spectrum(psi);
  for (double L : {0.01, 0.1}) {
    const auto b = momentum_spectrum(drift(psi, L / kin.v0, kin));
    CHECK(test::l1(a.density, b.density, a.dp()) < 1e-10);
  }
}

TEST_CASE("mean shift") {
  const auto s = synthetic(1e-27, 0.0, 0.0);
  CHECK(mean_shift(s, s) == 0.0);
  const auto moved = synthetic(1e-27, 0.0, 0.0, 1e-28);
  CHECK(mean_shift(moved, s) == doctest::Approx(1e-28).epsilon(1e-6));
  auto other = s;
  for (auto& p : other.p_axis) p += 0.5 * s.dp();
  CHECK_THROWS_AS(mean_shift(other, s), ConfigurationError);
}

TEST_CASE("sideband weights: limits and resolvability") {
  const auto s = synthetic(1e-29, 0.0, 0.0);
  const auto w = sideband_weights(s, 1e-28, 3, 1e-29);
  const double tail = 0.5 * std::erfc(5.0 / std::sqrt(2.0));
  CHECK(w.at(0) == doctest::Approx(std::erf(5.0 / std::sqrt(2.0))).epsilon(1e-8));
  for (int n : {-1, 1}) CHECK(w.at(n) == doctest::Approx(tail).epsilon(1e-3));
  for (int n : {-3, -2, 2, 3}) CHECK(w.at(n) < 1e-40);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-6));
  try {
    (void)sideband_weights(s, 3e-29, 2, 1e-29);
    FAIL("unresolvable spacing accepted");
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).find("recoil") != std::string::npos);
  }
}

TEST_CASE("sideband weights of a quantum-regime run") {
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(test::beam(0.4e-6), 0.2e-6, 0.1);
  const auto spec = momentum_spectrum(simulate(sc, kin).final_state);
  const double recoil = photon_scale(sc.laser.lambda, kin).recoil;
  const auto w = sideband_weights(spec, recoil, 3, sc.beam.sigma_p0());
  CHECK(w.at(1) == doctest::Approx(0.01).epsilon(0.05));
  CHECK(w.at(-1) == doctest::Approx(0.01).epsilon(0.05));
  CHECK(w.at(0) == doctest::Approx(0.98).epsilon(0.001));
  CHECK(std::abs(w.at(1) - w.at(-1)) < 1e-3);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-6));
  const auto spacing = sideband_spacing_estimate(spec);
  REQUIRE(spacing.has_value());
  CHECK(*spacing == doctest::Approx(recoil).epsilon(0.01));

  std::vector<double> rho0 = momentum_spectrum(prepare_entrance(sc.beam, sc.grid, kin)).density;
  const auto oracle = pinem_spectrum_first_order(rho0, spec.dp(), 0.1, recoil);
  Spectrum os = spec;
  os.density = oracle.density;
  const auto wo = sideband_weights(os, recoil, 3, sc.beam.sigma_p0());
  CHECK(w.at(1) == doctest::Approx(wo.at(1)).epsilon(0.05));
}

TEST_CASE("fringe estimator: synthetic input") {
  const double period = 1.5e-27;
  const auto s = synthetic(8e-27, period, 1.0);
  const auto f = fringe_spacing_estimate(s);
  REQUIRE(f.detected);
  CHECK(f.period == doctest::Approx(period).epsilon(0.02));
  CHECK(f.support_periods >= 5.0);
  CHECK(std::isfinite(f.period_peak_to_peak));
  CHECK(f.period_peak_to_peak == doctest::Approx(period).epsilon(0.1));

  SUBCASE("invariant under rescaling and axis shift") {
    auto scaled = s;
    for (auto& v : scaled.density) v *= 7.3;
    auto moved = synthetic(8e-27, period, 1.0, 2.3e-27);
    CHECK(fringe_spacing_estimate(scaled).period == doctest::Approx(f.period).epsilon(1e-9));
    CHECK(fringe_spacing_estimate(moved).period == doctest::Approx(f.period).epsilon(1e-3));
  }
  SUBCASE("pure Gaussian reports no fringes") {
    CHECK_FALSE(fringe_spacing_estimate(synthetic(8e-27, 0.0, 0.0)).detected);
  }
}

TEST_CASE("visibility") {
  CHECK(visibility(synthetic(8e-27, 1.5e-27, 1.0), 1.5e-27) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(visibility(synthetic(8e-27, 1.5e-27, 0.3), 1.5e-27) == doctest::Approx(0.3).epsilon(0.05));
  CHECK(visibility(synthetic(8e-27, 0.0, 0.0), 1.5e-27) < 0.01);
  const auto s = synthetic(8e-27, 1.5e-27, 1.0);
  double last = 2.0;
  for (double sig : {0.0, 1e-28, 3e-28, 6e-28, 1e-27}) {
    const double v = visibility(convolve_gaussian(s, sig), 1.5e-27);
    CHECK(v < last);
    last = v;
  }
}

TEST_CASE("Gaussian convolution adds variances") {
  const auto s = synthetic(5e-28, 0.0, 0.0);
  CHECK(test::l1(convolve_gaussian(s, 0.0).density, s.density, s.dp()) == 0.0);
  const auto c = convolve_gaussian(s, 5e-28);
  CHECK(c.stddev() == doctest::Approx(std::sqrt(2.0) * 5e-28).epsilon(1e-6));
  INFO((c.integral() - s.integral()));
  CHECK(c.integral() == doctest::Approx(s.integral()).epsilon(1e-10));
}

TEST_CASE("ensemble: zero jitter is the identity") {
  const auto kin = kinematics_from_beta(0.7);
  const auto sc = small_scenario(0.1);
  EnsembleParams ens;
  ens.n_draws = 3;
  const auto avg = ensemble_average(sc, kin, ens);
  const auto one = momentum_spectrum(simulate(sc, kin).final_state);
  CHECK(test::l1(avg.density, one.density, one.dp()) < 1e-12);
}

TEST_CASE("ensemble: zero-field width law") {
  const auto kin = kinematics_from_beta(0.7);
  const auto sc = small_scenario(0.0);
  EnsembleParams ens;
  ens.n_draws = 1;
  ens.sigma_E_part = sc.beam.sigma_E0(kin);
  const auto spec = ensemble_average(sc, kin, ens);
  const double dE = 2.0 * kin.v0 * spec.stddev();
  CHECK(dE == doctest::Approx(2.0 * std::sqrt(2.0) * sc.beam.sigma_E0(kin)).epsilon(0.01));
}

TEST_CASE("ensemble: phase draws are seeded and order independent") {
  const auto sc = small_scenario(0.1);
  EnsembleParams ens;
  ens.sigma_t_jitter = 1e-16;
  ens.seed = 42;
  ens.n_draws = 16;
  const auto a = phase_draws(sc, ens);
  CHECK(a == phase_draws(sc, ens));
  ens.seed = 43;
  CHECK(a != phase_draws(sc, ens));
  ens.seed = 42;
  ens.n_draws = 8;
  const auto b = phase_draws(sc, ens);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(a[i] == b[i]);
  ens.uniform_phase = true;
  const auto u = phase_draws(sc, ens);
  CHECK(u[1] - u[0] == doctest::Approx(2.0 * k::pi / 8.0));

  const auto kin = kinematics_from_beta(0.7);
  ens.uniform_phase = false;
  ens.n_draws = 4;
  auto& threads = thread_count_setting();
  const auto saved = threads;
  threads = 1;
  const auto serial = ensemble_average(sc, kin, ens);
  threads = 3;
  const auto parallel = ensemble_average(sc, kin, ens);
  threads = saved;
  CHECK(serial.density == parallel.density);
}

TEST_CASE("ensemble: analytic phase average matches Monte-Carlo trend") {
  const auto kin = kinematics_from_beta(0.7);
  const auto sc = small_scenario(0.05);
  EnsembleParams ens;
  ens.sigma_t_jitter = 0.3 / sc.laser.omega();
  ens.analytic_phase = true;
  const auto analytic = ensemble_average(sc, kin, ens);
  const auto entrance = momentum_spectrum(prepare_entrance(sc.beam, sc.grid, kin));
  const double expected = first_order_theory(sc.beam, sc.laser, kin).dp_mean * std::exp(-0.5 * 0.09);
  CHECK(mean_shift(analytic, entrance) == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("sweep: single point equals simulate plus estimator, failures recorded") {
  SweepSpec spec;
  spec.beam = test::beam(0.04e-6, 0.4);
  spec.upsilon = 0.1;
  spec.beta_lambdas = {1.2e-6};
  const auto r = sweep_fringe_vs_wavelength(spec);
  REQUIRE(r.points.size() == 1);
  REQUIRE(r.points[0].ok);
  const auto kin = kinematics_from_beta(0.7);
  auto sc = test::scenario(spec.beam, 1.2e-6, 0.1);
  const auto f = fringe_spacing_estimate(momentum_spectrum(simulate(sc, kin).final_state));
  CHECK(r.points[0].measured == f.period);
  CHECK(r.points[0].predicted_apinem == doctest::Approx(1.57e-27).epsilon(0.005));
  CHECK_FALSE(r.any_failed());

  SweepSpec bad = spec;
  bad.beam.L_D = 0.0;  // classical regime: no spectral period
  bad.beta_lambdas = {1.2e-6, 1.4e-6};
  const auto rb = sweep_fringe_vs_wavelength(bad);
  CHECK(rb.points.size() == 2);
  CHECK(rb.any_failed());
  CHECK_FALSE(rb.points[1].error.empty());
}
