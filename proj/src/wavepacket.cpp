#include "qew/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/fft.hpp"

namespace qew {

namespace k = constants;

double BeamParams::sigma_p0() const { return k::hbar / (2.0 * sigma_z0); }
double BeamParams::sigma_t0(const Kinematics& kin) const { return sigma_z0 / kin.v0; }
double BeamParams::sigma_E0(const Kinematics& kin) const { return kin.v0 * sigma_p0(); }
double BeamParams::drift_time(const Kinematics& kin) const { return L_D / kin.v0; }

double GridSpec::dp() const { return 2.0 * k::pi * k::hbar / z_span; }

double GridSpec::p_offset(std::size_t idx) const {
  return static_cast<double>(fft::signed_bin(idx, N)) * dp();
}

void GridSpec::validate() const {
  if (N < 2 || (N & (N - 1)) != 0) {
    throw ConfigurationError("grid N must be a power of two >= 2, got " + std::to_string(N));
  }
  if (!(z_span > 0.0) || !std::isfinite(z_span)) {
    throw ConfigurationError("grid z_span must be positive");
  }
}

GridSpec default_grid(const BeamParams& beam, const Kinematics& kin, double beta_lambda) {
  GridSpec g;
  const double sz = analytic_sigma_z(beam.sigma_z0, beam.drift_time(kin), kin);
  g.z_span = std::max(32.0 * sz, 16.0 * beta_lambda);
  g.N = 16384;
  while (g.dz() > beam.sigma_z0 / 8.0) g.N *= 2;
  return g;
}

double Wavefunction::norm() const {
  double s = 0.0;
  for (const auto& v : samples) s += std::norm(v);
  return s * grid.dz();
}

Wavefunction gaussian_waist(const BeamParams& beam, const GridSpec& grid, const Kinematics& kin) {
  grid.validate();
  if (!(beam.sigma_z0 > 0.0)) throw DomainError("sigma_z0 must be positive");
  if (grid.dz() > beam.sigma_z0 / 8.0) {
    throw ConfigurationError("grid too coarse: dz <= sigma_z0/8 violated (dz=" +
                             std::to_string(grid.dz()) + " m)");
  }
  if (grid.z_span < 16.0 * beam.sigma_z0) {
    throw ConfigurationError("grid too narrow: z_span >= 16 sigma_z0 violated");
  }
  Wavefunction psi;
  psi.grid = grid;
  psi.p0 = kin.p0;
  psi.samples.resize(grid.N);
  const double s = beam.sigma_z0;
  for (std::size_t i = 0; i < grid.N; ++i) {
    const double z = grid.zeta(i);
    psi.samples[i] = std::exp(-z * z / (4.0 * s * s));
  }
  // Normalize the discrete sum rather than the continuum integral.
  const double n = std::sqrt(psi.norm());
  for (auto& v : psi.samples) v /= n;
  return psi;
}

double analytic_sigma_z(double sigma_z0, double t_D, const Kinematics& kin) {
  if (!(sigma_z0 > 0.0)) throw DomainError("sigma_z0 must be positive");
  const double spread = kin.lambda_C_star * k::c * t_D / (4.0 * k::pi * sigma_z0);
  return std::sqrt(sigma_z0 * sigma_z0 + spread * spread);
}

std::vector<cplx> to_momentum(const Wavefunction& psi) {
  std::vector<cplx> phi = psi.samples;
  fft::forward(phi);
  const double scale = psi.grid.dz() / std::sqrt(2.0 * k::pi * k::hbar);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    // (-1)^k accounts for the grid origin at index N/2.
    phi[i] *= (i % 2 == 0) ? scale : -scale;
  }
  return phi;
}

void from_momentum(std::vector<cplx> phi, Wavefunction& psi) {
  const double n = static_cast<double>(phi.size());
  const double scale = std::sqrt(2.0 * k::pi * k::hbar) / (psi.grid.dz() * n);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] *= (i % 2 == 0) ? scale : -scale;
  fft::backward(phi);
  psi.samples = std::move(phi);
}

std::vector<double> momentum_density(const Wavefunction& psi) {
  const auto phi = to_momentum(psi);
  const std::size_t n = phi.size();
  std::vector<double> rho(n);
  // FFT order -> ascending: bin k (signed k') lands at k' + N/2.
  for (std::size_t i = 0; i < n; ++i) rho[(i + n / 2) % n] = std::norm(phi[i]);
  return rho;
}

std::vector<double> position_density(const Wavefunction& psi) {
  std::vector<double> rho(psi.samples.size());
  std::transform(psi.samples.begin(), psi.samples.end(), rho.begin(),
                 [](cplx v) { return std::norm(v); });
  return rho;
}

double momentum_edge_probability(const Wavefunction& psi, std::size_t cells) {
  const auto rho = momentum_density(psi);
  const std::size_t n = rho.size();
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(cells, n); ++i) s += rho[i] + rho[n - 1 - i];
  return s * psi.grid.dp();
}

double position_edge_probability(const Wavefunction& psi, std::size_t cells) {
  const std::size_t n = psi.samples.size();
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(cells, n); ++i) {
    s += std::norm(psi.samples[i]) + std::norm(psi.samples[n - 1 - i]);
  }
  return s * psi.grid.dz();
}

void check_aliasing(const Wavefunction& psi, const char* where) {
  constexpr double limit = 1e-6;
  const double pe = momentum_edge_probability(psi);
  if (pe >= limit) {
    throw AliasingError(std::string(where) + ": probability " + std::to_string(pe) +
                        " at the momentum window edge");
  }
  const double ze = position_edge_probability(psi);
  if (ze >= limit) {
    throw AliasingError(std::string(where) + ": probability " + std::to_string(ze) +
                        " at the position window edge");
  }
}

Wavefunction drift(const Wavefunction& psi, double t_D, const Kinematics& kin) {
  if (t_D == 0.0) return psi;
  check_aliasing(psi, "drift");
  std::vector<cplx> phi = psi.samples;
  fft::forward(phi);
  const auto& g = psi.grid;
  const double a = t_D / (2.0 * kin.m_star * k::hbar);
  const double inv_n = 1.0 / static_cast<double>(g.N);
  for (std::size_t i = 0; i < g.N; ++i) {
    const double dp = g.p_offset(i);
    phi[i] *= std::polar(inv_n, -a * dp * dp);
  }
  fft::backward(phi);
  Wavefunction out = psi;
  out.samples = std::move(phi);
  out.t_elapsed += t_D;
  check_aliasing(out, "drift");
  return out;
}

Moments moments(const Wavefunction& psi) {
  const auto& g = psi.grid;
  const double dz = g.dz();
  double m0 = 0.0, mz = 0.0, mzz = 0.0;
  for (std::size_t i = 0; i < g.N; ++i) {
    const double w = std::norm(psi.samples[i]);
    const double z = g.zeta(i);
    m0 += w;
    mz += w * z;
    mzz += w * z * z;
  }
  m0 *= dz;
  mz *= dz / m0;
  mzz *= dz / m0;

  std::vector<cplx> phi = psi.samples;
  fft::forward(phi);
  double q0 = 0.0, qp = 0.0, qpp = 0.0;
  for (std::size_t i = 0; i < g.N; ++i) {
    const double w = std::norm(phi[i]);
    const double p = g.p_offset(i);
    q0 += w;
    qp += w * p;
    qpp += w * p * p;
  }
  qp /= q0;
  qpp /= q0;

  // (p - p0) psi in position space, then Re <psi| zeta P |psi>.
  const double inv_n = 1.0 / static_cast<double>(g.N);
  for (std::size_t i = 0; i < g.N; ++i) phi[i] *= g.p_offset(i) * inv_n;
  fft::backward(phi);
  double zp = 0.0;
  for (std::size_t i = 0; i < g.N; ++i) {
    zp += g.zeta(i) * (std::conj(psi.samples[i]) * phi[i]).real();
  }
  zp *= dz / m0;

  Moments m;
  m.mean_z = mz;
  m.mean_p = psi.p0 + qp;
  m.sigma_z = std::sqrt(std::max(mzz - mz * mz, 0.0));
  m.sigma_p = std::sqrt(std::max(qpp - qp * qp, 0.0));
  m.cov_zp = zp - mz * qp;
  m.area = 2.0 * k::pi *
           std::sqrt(std::max(m.sigma_z * m.sigma_z * m.sigma_p * m.sigma_p - m.cov_zp * m.cov_zp, 0.0));
  return m;
}

double fidelity(const Wavefunction& a, const Wavefunction& b) {
  if (a.samples.size() != b.samples.size()) {
    throw ConfigurationError("fidelity: grid size mismatch");
  }
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) s += std::conj(a.samples[i]) * b.samples[i];
  return std::abs(s) * a.grid.dz();
}

}  // namespace qew
