#include "qew/kinematics.hpp"

#include <cmath>
#include <string>

#include "qew/constants.hpp"
#include "qew/errors.hpp"

namespace qew {

Kinematics kinematics_from_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in (0,1), got " + std::to_string(beta));
  }
  namespace k = constants;
  Kinematics kin;
  kin.beta = beta;
  kin.gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  kin.v0 = beta * k::c;
  kin.p0 = kin.gamma * k::m_e * kin.v0;
  const double g3 = kin.gamma * kin.gamma * kin.gamma;
  kin.m_star = g3 * k::m_e;
  kin.lambda_C_star = k::lambda_C / g3;
  return kin;
}

PhotonScale photon_scale(double lambda, const Kinematics& kin) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("optical wavelength must be positive and finite");
  }
  namespace k = constants;
  PhotonScale ps;
  ps.lambda = lambda;
  ps.omega = 2.0 * k::pi * k::c / lambda;
  ps.period = 2.0 * k::pi / ps.omega;
  ps.hbar_omega = k::hbar * ps.omega;
  ps.recoil = ps.hbar_omega / kin.v0;
  ps.beta_lambda = kin.beta * lambda;
  return ps;
}

}  // namespace qew
