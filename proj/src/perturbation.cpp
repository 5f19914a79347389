#include "qew/perturbation.hpp"

#include <cmath>
#include <limits>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/fft.hpp"

namespace qew {

namespace k = constants;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double coupling_upsilon(double E0, double L, double omega) {
  return k::e * E0 * L / (2.0 * k::hbar * omega);
}

double detuning_theta(double omega, double v0, double q_z, double L) {
  return (omega / v0 - q_z) * L;
}

double point_particle_shift(double E0, double L, double v0, double theta_bar, double phi0) {
  return -(k::e * E0 * L / v0) * sinc(0.5 * theta_bar) * std::cos(phi0 + 0.5 * theta_bar);
}

double gamma_factor(double sigma_z, double beta_lambda) {
  if (!(sigma_z > 0.0) || !(beta_lambda > 0.0)) {
    throw DomainError("gamma_factor requires positive sigma_z and beta_lambda");
  }
  return 2.0 * k::pi * sigma_z / beta_lambda;
}

double expected_shift(double dp_point, double gamma) {
  if (gamma < 0.0) throw DomainError("Gamma must be non-negative");
  return dp_point * std::exp(-0.5 * gamma * gamma);
}

FirstOrderSpectrum pinem_spectrum_first_order(std::span<const double> rho0, double dp,
                                              double upsilon, double recoil) {
  FirstOrderSpectrum out;
  out.validity_warning = upsilon > 0.3;
  const std::size_t n = rho0.size();
  std::vector<cplx> f(rho0.begin(), rho0.end());
  fft::forward(f);
  // rho0(p - s) + rho0(p + s) has transform 2 cos(2 pi nu s) R(nu).
  const double u2 = upsilon * upsilon;
  const double span = dp * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double nu = static_cast<double>(fft::signed_bin(i, n)) / span;
    double w = (1.0 - 2.0 * u2) + 2.0 * u2 * std::cos(2.0 * k::pi * nu * recoil);
    f[i] *= w / static_cast<double>(n);
  }
  fft::backward(f);
  out.density.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.density[i] = f[i].real();
  return out;
}

FringePrediction apinem_fringe_spacing(const BeamParams& beam, const Kinematics& kin,
                                       double beta_lambda) {
  FringePrediction fp;
  const double sz = analytic_sigma_z(beam.sigma_z0, beam.drift_time(kin), kin);
  fp.delta_p = beam.sigma_p0() * beta_lambda / sz;
  fp.delta_p_far = beam.L_D != 0.0 ? kin.m_star * kin.v0 * beta_lambda / std::abs(beam.L_D)
                                   : std::numeric_limits<double>::infinity();
  fp.delta_E = kin.v0 * fp.delta_p;
  fp.delta_E_far = kin.v0 * fp.delta_p_far;
  return fp;
}

FirstOrderTheory first_order_theory(const BeamParams& beam, const LaserField& laser,
                                    const Kinematics& kin) {
  FirstOrderTheory th;
  const double omega = laser.omega();
  const double beta_lambda = kin.beta * laser.lambda;
  th.upsilon = coupling_upsilon(laser.E0, laser.L, omega);
  th.theta_bar = detuning_theta(omega, kin.v0, laser.q_z, laser.L);
  th.dp_point = point_particle_shift(laser.E0, laser.L, kin.v0, th.theta_bar, laser.phi0);
  th.sigma_z_entrance = analytic_sigma_z(beam.sigma_z0, beam.drift_time(kin), kin);
  th.Gamma = gamma_factor(th.sigma_z_entrance, beta_lambda);
  th.Gamma0 = gamma_factor(beam.sigma_z0, beta_lambda);
  th.damping = std::exp(-0.5 * th.Gamma * th.Gamma);
  th.dp_mean = expected_shift(th.dp_point, th.Gamma);
  const auto fp = apinem_fringe_spacing(beam, kin, beta_lambda);
  th.delta_p_fringe = fp.delta_p;
  th.delta_p_fringe_far = fp.delta_p_far;
  th.delta_E_fringe = fp.delta_E;
  th.sideband_spacing = k::hbar * omega / kin.v0;
  return th;
}

Wavefunction FirstOrderState::psi1(double phi0) const {
  Wavefunction out = plus;
  const cplx ep = std::polar(1.0, phi0);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = ep * plus.samples[i] - std::conj(ep) * minus.samples[i];
  }
  return out;
}

Wavefunction FirstOrderState::total(double phi0) const {
  Wavefunction out = psi1(phi0);
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += psi0.samples[i];
  return out;
}

FirstOrderState first_order_state(const Wavefunction& entrance, const LaserField& laser,
                                  const Kinematics& kin) {
  const auto& g = entrance.grid;
  const double T = laser.interaction_time(kin);
  const double detune = laser.q_z * kin.v0 - laser.omega();
  const double ups = coupling_upsilon(laser.E0, laser.L, laser.omega());
  const double hq = k::hbar * laser.q_z;
  auto energy = [&](double p) { return p * p / (2.0 * kin.m_star); };

  // Momentum-shifted copies of the entrance state: phi_e(p -/+ hbar q).
  auto modulated = [&](double sign) {
    Wavefunction w = entrance;
    for (std::size_t i = 0; i < g.N; ++i) {
      w.samples[i] *= std::polar(1.0, sign * laser.q_z * g.zeta(i));
    }
    return to_momentum(w);
  };
  const auto phi_e = to_momentum(entrance);
  const auto phi_lo = modulated(+1.0);  // phi_e(p - hbar q)
  const auto phi_hi = modulated(-1.0);  // phi_e(p + hbar q)

  std::vector<cplx> m0(g.N), mp(g.N), mm(g.N);
  auto window = [&](double kappa) {
    const double x = 0.5 * kappa * T;
    return T * std::polar(sinc(x), x);
  };
  for (std::size_t i = 0; i < g.N; ++i) {
    const double p = g.p_offset(i);
    const double e = energy(p);
    const cplx free = std::polar(1.0, -e * T / k::hbar);
    m0[i] = free * phi_e[i];
    const double kp = (e - energy(p - hq)) / k::hbar + detune;
    const double km = (e - energy(p + hq)) / k::hbar - detune;
    // -Y/T * T-window: the integral over [0,T] carries the factor T.
    mp[i] = -(ups / T) * free * window(kp) * phi_lo[i];
    mm[i] = -(ups / T) * free * window(km) * phi_hi[i];
  }
  FirstOrderState st{entrance, entrance, entrance};
  from_momentum(std::move(m0), st.psi0);
  from_momentum(std::move(mp), st.plus);
  from_momentum(std::move(mm), st.minus);
  for (auto* w : {&st.psi0, &st.plus, &st.minus}) w->t_elapsed = entrance.t_elapsed + T;
  return st;
}

}  // namespace qew
