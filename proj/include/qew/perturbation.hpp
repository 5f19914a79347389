#pragma once

#include <span>
#include <vector>

#include "qew/kinematics.hpp"
#include "qew/propagator.hpp"
#include "qew/wavepacket.hpp"

namespace qew {

/// Unnormalized sinc, sin(x)/x, with a Taylor branch near zero.
double sinc(double x);

/// e E0 L / (2 hbar omega).
double coupling_upsilon(double E0, double L, double omega);

/// (omega / v0 - q_z) L.
double detuning_theta(double omega, double v0, double q_z, double L);

/// Classical point-particle momentum gain
/// -(e E0 L / v0) sinc(theta/2) cos(phi0 + theta/2).
double point_particle_shift(double E0, double L, double v0, double theta_bar, double phi0);

/// 2 pi sigma_z / (beta lambda).
double gamma_factor(double sigma_z, double beta_lambda);

/// dp_point exp(-Gamma^2 / 2).
double expected_shift(double dp_point, double gamma);

struct FirstOrderSpectrum {
  std::vector<double> density;
  bool validity_warning = false;  // upsilon above the first-order range (0.3)
};

/// (1 - 2Y^2) rho0(p) + Y^2 [rho0(p + recoil) + rho0(p - recoil)] for rho0
/// sampled on a uniform axis with spacing dp. Shifts are applied
/// spectrally, so rho0 must decay to zero well inside the axis.
FirstOrderSpectrum pinem_spectrum_first_order(std::span<const double> rho0, double dp,
                                              double upsilon, double recoil);

struct FringePrediction {
  double delta_p = 0.0;      // sigma_p0 beta_lambda / sigma_z(t_D)
  double delta_p_far = 0.0;  // m* v0 beta_lambda / |L_D|
  double delta_E = 0.0;      // v0 delta_p
  double delta_E_far = 0.0;
};

/// Momentum period of the anomalous-PINEM interference fringes.
FringePrediction apinem_fringe_spacing(const BeamParams& beam, const Kinematics& kin,
                                       double beta_lambda);

struct FirstOrderTheory {
  double upsilon = 0.0;
  double theta_bar = 0.0;
  double dp_point = 0.0;
  double Gamma = 0.0;
  double Gamma0 = 0.0;
  double damping = 1.0;
  double dp_mean = 0.0;
  double delta_p_fringe = 0.0;
  double delta_p_fringe_far = 0.0;
  double delta_E_fringe = 0.0;
  double sideband_spacing = 0.0;  // hbar omega / v0
  double sigma_z_entrance = 0.0;
};

/// Entrance phase is taken from the laser (the field the propagator uses).
FirstOrderTheory first_order_theory(const BeamParams& beam, const LaserField& laser,
                                    const Kinematics& kin);

/// First-order Dyson solution across the interaction window, in closed form
/// for the top-hat envelope. With psi_e the entrance state,
///   psi(T) ~= psi0 + exp(i phi0) plus - exp(-i phi0) minus,
/// where psi0 is the free evolution of psi_e over T = L/v0 and plus/minus are
/// the phase-independent absorption/emission amplitudes.
struct FirstOrderState {
  Wavefunction psi0;
  Wavefunction plus;
  Wavefunction minus;

  Wavefunction psi1(double phi0) const;
  Wavefunction total(double phi0) const;
};

/// The laser's own phi0 is ignored here; pass it to psi1()/total().
FirstOrderState first_order_state(const Wavefunction& entrance, const LaserField& laser,
                                  const Kinematics& kin);

}  // namespace qew
