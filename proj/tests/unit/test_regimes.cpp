#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/regimes.hpp"

using namespace qew;
namespace k = qew::constants;

namespace {

const double kSqrt2 = std::sqrt(2.0);

DiagramRange range(std::size_t ns, std::size_t nl) {
  DiagramRange r;
  r.n_sigma = ns;
  r.n_LD = nl;
  return r;
}

}  // namespace

TEST_CASE("classify: three scenarios of the figure") {
  const double lam12 = 1.2e-6 / 0.7;
  const auto a = classify(test::beam(0.4e-6), 0.2e-6 / 0.7);
  CHECK(a.Gamma0 == doctest::Approx(12.57).epsilon(1e-3));
  CHECK(a.label == Regime::PINEM);
  CHECK(a.predicted_spectral_period.has_value());

  const auto b = classify(test::beam(0.04e-6), lam12);
  CHECK(b.Gamma0 == doctest::Approx(0.209).epsilon(2e-3));
  CHECK(b.Gamma == b.Gamma0);
  CHECK(b.label == Regime::Acceleration);
  CHECK_FALSE(b.predicted_spectral_period.has_value());

  const auto c = classify(test::beam(0.04e-6, 0.6), lam12);
  CHECK(c.Gamma0 == doctest::Approx(0.209).epsilon(2e-3));
  CHECK(c.Gamma == doctest::Approx(7.85).epsilon(0.01));
  CHECK(c.label == Regime::APINEM);
  CHECK(c.damping == doctest::Approx(std::exp(-0.5 * c.Gamma * c.Gamma)));
}

TEST_CASE("label rule: exclusive, exhaustive, ties to the quantum side") {
  CHECK(label_for(0.1, 0.5) == Regime::Acceleration);
  CHECK(label_for(0.1, kSqrt2) == Regime::APINEM);
  CHECK(label_for(kSqrt2, kSqrt2) == Regime::PINEM);
  CHECK(label_for(2.0, 3.0) == Regime::PINEM);
  CHECK(label_for(1.0, 3.0) == Regime::APINEM);
  for (double g0 = 0.05; g0 < 4.0; g0 += 0.05) {
    for (double g = g0; g < 6.0; g += 0.05) {
      const auto l = label_for(g0, g);
      CHECK((l == Regime::Acceleration) == (g < kSqrt2));
      CHECK((l == Regime::PINEM) == (g0 >= kSqrt2));
    }
  }
  CHECK(to_string(Regime::APINEM) == "APINEM");
}

TEST_CASE("phase diagram: consistency with classify and damping") {
  const auto d = phase_diagram(range(64, 48), 0.7, 0.8e-6);
  REQUIRE(d.labels.size() == 64 * 48);
  for (std::size_t i = 0; i < d.n_LD(); ++i) {
    for (std::size_t j = 0; j < d.n_sigma(); ++j) {
      const auto r = classify(test::beam(d.sigma_z0_axis[j], d.L_D_axis[i]), 0.8e-6);
      const auto idx = d.index(i, j);
      CHECK(d.labels[idx] == r.label);
      CHECK(std::abs(d.damping[idx] - std::exp(-0.5 * r.Gamma * r.Gamma)) < 1e-12);
      CHECK(d.damping[idx] >= 0.0);
      CHECK(d.damping[idx] <= 1.0);
    }
  }
}

TEST_CASE("phase diagram: symmetric in L_D") {
  const auto d = phase_diagram(range(32, 33), 0.7, 0.8e-6);
  for (std::size_t i = 0; i < d.n_LD(); ++i) {
    const std::size_t m = d.n_LD() - 1 - i;
    CHECK(d.L_D_axis[i] == doctest::Approx(-d.L_D_axis[m]));
    for (std::size_t j = 0; j < d.n_sigma(); ++j) {
      CHECK(d.labels[d.index(i, j)] == d.labels[d.index(m, j)]);
      CHECK(d.damping[d.index(i, j)] == doctest::Approx(d.damping[d.index(m, j)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("phase diagram: boundaries at beta lambda / (sqrt2 pi)") {
  const auto d = phase_diagram(range(256, 256), 0.7, 0.8e-6);
  const double thresh = 0.7 * 0.8e-6 / (kSqrt2 * k::pi);
  CHECK(thresh == doctest::Approx(0.126e-6).epsilon(0.001));
  const double cell = std::log(d.sigma_z0_axis[1] / d.sigma_z0_axis[0]);

  REQUIRE_FALSE(d.gamma_contour.empty());
  double smax = 0.0;
  for (const auto& pl : d.gamma_contour) {
    for (double s : pl.sigma_z0) smax = std::max(smax, s);
  }
  CHECK(std::abs(std::log(smax / thresh)) < cell);

  REQUIRE_FALSE(d.gamma0_contour.empty());
  for (const auto& pl : d.gamma0_contour) {
    for (double s : pl.sigma_z0) CHECK(std::abs(std::log(s / thresh)) < cell);
  }

  for (std::size_t i = 0; i < d.n_LD(); ++i) {
    for (std::size_t j = 0; j < d.n_sigma(); ++j) {
      const auto l = d.labels[d.index(i, j)];
      if (l == Regime::PINEM) CHECK(d.sigma_z0_axis[j] >= thresh);
      if (l == Regime::Acceleration) {
        CHECK(d.gamma[d.index(i, j)] < kSqrt2);
        CHECK(d.sigma_z0_axis[j] < thresh);
      }
    }
  }
  // Acceleration is bounded in L_D: the window edges are never classical.
  for (std::size_t j = 0; j < d.n_sigma(); ++j) {
    CHECK(d.labels[d.index(0, j)] != Regime::Acceleration);
    CHECK(d.labels[d.index(d.n_LD() - 1, j)] != Regime::Acceleration);
  }
}

TEST_CASE("phase diagram: line scans and invalid ranges") {
  DiagramRange line = range(1, 64);
  line.sigma_min = line.sigma_max = 0.04e-6;
  const auto d = phase_diagram(line, 0.7, 0.8e-6);
  CHECK(d.n_sigma() == 1);
  CHECK(d.n_LD() == 64);
  CHECK(d.labels.size() == 64);

  CHECK_THROWS(phase_diagram(range(8, 64), 0.7, 0.8e-6));
  DiagramRange flat = range(32, 32);
  flat.L_D_max = flat.L_D_min;
  CHECK_THROWS(phase_diagram(flat, 0.7, 0.8e-6));
  DiagramRange bad_line = range(1, 32);
  CHECK_THROWS(phase_diagram(bad_line, 0.7, 0.8e-6));
  CHECK_THROWS(phase_diagram(range(32, 32), 0.7, -1.0));
}

TEST_CASE("phase diagram: refinement flips labels only next to boundaries") {
  const auto coarse = phase_diagram(range(64, 64), 0.7, 0.8e-6);
  const auto fine = phase_diagram(range(127, 127), 0.7, 0.8e-6);
  // Fine node 2i coincides with coarse node i.
  for (std::size_t i = 0; i < 64; ++i) {
    for (std::size_t j = 0; j < 64; ++j) {
      const auto lc = coarse.labels[coarse.index(i, j)];
      const auto lf = fine.labels[fine.index(2 * i, 2 * j)];
      if (lc == lf) continue;
      bool near = false;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const auto ii = static_cast<std::ptrdiff_t>(i) + di, jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= 64 || jj >= 64) continue;
          near = near || coarse.labels[coarse.index(ii, jj)] != lc;
        }
      }
      CHECK(near);
    }
  }
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(fine.sigma_z0_axis[2 * i] == doctest::Approx(coarse.sigma_z0_axis[i]).epsilon(1e-12));
  }
}
