#pragma once

namespace qew {

/// Longitudinal relativistic kinematics of the carrier electron.
///
/// `m_star` is the longitudinal effective mass gamma^3 m_e that sets the
/// curvature of the energy dispersion around p0, and `lambda_C_star` is the
/// Compton wavelength scaled by the same factor.
struct Kinematics {
  double beta = 0.0;
  double gamma = 1.0;
  double v0 = 0.0;             // m/s
  double p0 = 0.0;             // kg m/s
  double m_star = 0.0;         // kg
  double lambda_C_star = 0.0;  // m
};

/// Optical drive scales as seen by an electron moving at v0.
struct PhotonScale {
  double lambda = 0.0;       // m
  double omega = 0.0;        // rad/s
  double period = 0.0;       // s
  double hbar_omega = 0.0;   // J
  double recoil = 0.0;       // hbar omega / v0, kg m/s
  double beta_lambda = 0.0;  // m
};

/// Throws DomainError unless 0 < beta < 1.
Kinematics kinematics_from_beta(double beta);

/// Throws DomainError unless lambda > 0.
PhotonScale photon_scale(double lambda, const Kinematics& kin);

}  // namespace qew
