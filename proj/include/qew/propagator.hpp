#pragma once

#include <span>
#include <vector>

#include "qew/kinematics.hpp"
#include "qew/wavepacket.hpp"

namespace qew {

/// Single synchronous space harmonic of a grating near field, switched on for
/// the interaction window [0, L/v0] (top-hat envelope).
struct LaserField {
  double lambda = 0.0;  // optical wavelength, m
  double E0 = 0.0;      // harmonic amplitude, V/m
  double q_z = 0.0;     // harmonic wavenumber, rad/m
  double L = 30e-6;     // interaction length, m
  double phi0 = 0.0;    // rad

  double omega() const;
  double interaction_time(const Kinematics& kin) const { return L / kin.v0; }
  /// Detuning (omega/v0 - q_z) L.
  double theta_bar(const Kinematics& kin) const;
};

/// Laser with q_z chosen for a given detuning theta_bar (0 = synchronism).
LaserField make_laser(double lambda, double E0, double L, double phi0, const Kinematics& kin,
                      double theta_bar = 0.0);

/// Field amplitude giving coupling upsilon = e E0 L / (2 hbar omega).
double field_for_upsilon(double upsilon, double L, double omega);

struct Scenario {
  BeamParams beam;
  LaserField laser;
  GridSpec grid;
  double dt = 0.0;                 // s
  std::vector<double> snapshots;   // times within [0, L/v0], s

  /// Throws ConfigurationError on dt <= 0, dt > T/64, or bad laser/grid.
  void validate(const Kinematics& kin) const;
};

/// Default step: one 256th of the optical period.
double default_dt(const LaserField& laser);

/// Scalar potential V(zeta, t) = (e v0 E0 / omega) sin(q_z zeta + (q_z v0 - omega) t + phi0)
/// in the comoving frame; identically zero outside [0, L/v0].
std::vector<double> effective_potential(const LaserField& laser, const Kinematics& kin,
                                        std::span<const double> zeta, double t);

/// One Strang step: half kinetic, full potential at t + dt/2, half kinetic.
Wavefunction step(const Wavefunction& psi, const LaserField& laser, const Kinematics& kin,
                  double t, double dt);

struct InteractionResult {
  Wavefunction final_state;
  std::vector<Wavefunction> snapshots;
  std::size_t steps = 0;
  double dt = 0.0;  // step actually used (T_int divided evenly)
};

/// Evolves psi (already at the interaction entrance) across the interaction
/// window. Consecutive half kinetic phases are fused; results agree with
/// repeated step() calls to rounding.
InteractionResult run_interaction(const Wavefunction& psi, const Scenario& scenario,
                                  const Kinematics& kin);

/// Waist Gaussian drifted by the beam's L_D.
Wavefunction prepare_entrance(const BeamParams& beam, const GridSpec& grid, const Kinematics& kin);

}  // namespace qew
