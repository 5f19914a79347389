#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qew/analysis.hpp"
#include "qew/kinematics.hpp"
#include "qew/propagator.hpp"
#include "qew/wavepacket.hpp"

namespace qew::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double l1(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * dx;
}

inline BeamParams beam(double sigma_z0, double L_D = 0.0, double phi0 = 0.0) {
  BeamParams b;
  b.beta = 0.7;
  b.sigma_z0 = sigma_z0;
  b.L_D = L_D;
  b.phi0 = phi0;
  return b;
}

/// Synchronous scenario at coupling upsilon; default grid unless N is given.
inline Scenario scenario(const BeamParams& b, double beta_lambda, double upsilon,
                         std::size_t N = 0, double L = 30e-6) {
  const auto kin = kinematics_from_beta(b.beta);
  const double lambda = beta_lambda / b.beta;
  const auto ps = photon_scale(lambda, kin);
  Scenario sc;
  sc.beam = b;
  sc.laser = make_laser(lambda, field_for_upsilon(upsilon, L, ps.omega), L, b.phi0, kin);
  sc.grid = default_grid(b, kin, beta_lambda);
  if (N != 0) {
    sc.grid.N = N;
    sc.grid.z_span = std::max(32.0 * analytic_sigma_z(b.sigma_z0, b.drift_time(kin), kin),
                              16.0 * beta_lambda);
  }
  sc.dt = default_dt(sc.laser);
  return sc;
}

inline std::string source_dir() { return QEW_SOURCE_DIR; }

}  // namespace qew::test
