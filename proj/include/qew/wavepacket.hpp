#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qew/kinematics.hpp"

namespace qew {

using cplx = std::complex<double>;

/// Entrance conditions of a minimum-uncertainty Gaussian electron wavepacket.
///
/// `L_D` is the free-drift length between the waist and the interaction
/// entrance. A negative value prepares a converging, negatively chirped packet
/// (equivalent to backward drift).
struct BeamParams {
  double beta = 0.7;
  double sigma_z0 = 0.0;  // waist rms length, m
  double L_D = 0.0;       // pre-interaction drift, m (signed)
  double phi0 = 0.0;      // entrance phase relative to the laser, rad

  double sigma_p0() const;                         // hbar / (2 sigma_z0)
  double sigma_t0(const Kinematics& kin) const;    // sigma_z0 / v0
  double sigma_E0(const Kinematics& kin) const;    // v0 sigma_p0
  double drift_time(const Kinematics& kin) const;  // L_D / v0
};

/// Uniform comoving grid zeta_i = (i - N/2) dz over a periodic window.
/// Momentum offsets from p0 are the discrete Fourier conjugates with spacing
/// dp = 2 pi hbar / z_span.
struct GridSpec {
  std::size_t N = 16384;
  double z_span = 0.0;

  double dz() const { return z_span / static_cast<double>(N); }
  double dp() const;
  double zeta(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(N / 2)) * dz();
  }
  /// Momentum offset (p - p0) of FFT bin k.
  double p_offset(std::size_t k) const;

  /// Throws ConfigurationError unless N is a power of two >= 2 and z_span > 0.
  void validate() const;
};

/// Default grid for a beam: window max(32 sigma_z(t_D), 16 beta lambda) with
/// N = 16384 grown (in powers of two) until dz <= sigma_z0 / 8.
GridSpec default_grid(const BeamParams& beam, const Kinematics& kin, double beta_lambda);

struct Wavefunction {
  std::vector<cplx> samples;  // psi(zeta_i), sum |psi|^2 dz = 1
  GridSpec grid;
  double p0 = 0.0;         // carrier momentum
  double t_elapsed = 0.0;  // s

  double norm() const;  // sum |psi|^2 dz
};

struct Moments {
  double mean_z = 0.0;
  double mean_p = 0.0;  // absolute momentum
  double sigma_z = 0.0;
  double sigma_p = 0.0;
  double cov_zp = 0.0;  // symmetrized <(z p + p z)/2> - <z><p>
  double area = 0.0;    // 2 pi sqrt(sigma_z^2 sigma_p^2 - cov^2)
};

/// Unit-norm, unchirped Gaussian centred at zeta = 0.
/// Throws ConfigurationError if dz > sigma_z0/8 or z_span < 16 sigma_z0.
Wavefunction gaussian_waist(const BeamParams& beam, const GridSpec& grid, const Kinematics& kin);

/// rms length after free drift time t_D: sqrt(s0^2 + (lambda_C* c t_D / (4 pi s0))^2).
double analytic_sigma_z(double sigma_z0, double t_D, const Kinematics& kin);

/// Exact free evolution for time t_D (either sign) under the quadratic
/// dispersion (p - p0)^2 / 2m*. Throws AliasingError if the momentum content
/// touches the window edge, or the drifted packet wraps around in zeta.
Wavefunction drift(const Wavefunction& psi, double t_D, const Kinematics& kin);

Moments moments(const Wavefunction& psi);

/// Momentum-space amplitudes phi(p0 + p_offset(k)) in FFT bin order,
/// normalized so that sum |phi_k|^2 dp = 1.
std::vector<cplx> to_momentum(const Wavefunction& psi);
/// Inverse of to_momentum; writes into psi.samples.
void from_momentum(std::vector<cplx> phi, Wavefunction& psi);

/// |phi(p)|^2 on the ascending axis p_i = p0 + (i - N/2) dp.
std::vector<double> momentum_density(const Wavefunction& psi);
std::vector<double> position_density(const Wavefunction& psi);

/// Probability within `cells` bins of the momentum and position window edges.
double momentum_edge_probability(const Wavefunction& psi, std::size_t cells = 3);
double position_edge_probability(const Wavefunction& psi, std::size_t cells = 3);

/// Throws AliasingError if either edge probability is >= 1e-6.
void check_aliasing(const Wavefunction& psi, const char* where);

/// |<a|b>|; grids must match.
double fidelity(const Wavefunction& a, const Wavefunction& b);

}  // namespace qew
