#include "qew/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/fft.hpp"

namespace qew {

namespace k = constants;

double LaserField::omega() const { return 2.0 * k::pi * k::c / lambda; }

double LaserField::theta_bar(const Kinematics& kin) const {
  return (omega() / kin.v0 - q_z) * L;
}

LaserField make_laser(double lambda, double E0, double L, double phi0, const Kinematics& kin,
                      double theta_bar) {
  if (!(lambda > 0.0)) throw DomainError("laser wavelength must be positive");
  if (!(L > 0.0)) throw DomainError("interaction length must be positive");
  LaserField f;
  f.lambda = lambda;
  f.E0 = E0;
  f.L = L;
  f.phi0 = phi0;
  f.q_z = f.omega() / kin.v0 - theta_bar / L;
  return f;
}

double field_for_upsilon(double upsilon, double L, double omega) {
  return 2.0 * k::hbar * omega * upsilon / (k::e * L);
}

double default_dt(const LaserField& laser) { return 2.0 * k::pi / laser.omega() / 256.0; }

void Scenario::validate(const Kinematics& kin) const {
  grid.validate();
  if (!(laser.lambda > 0.0)) throw ConfigurationError("laser lambda must be positive");
  if (!(laser.E0 >= 0.0)) throw ConfigurationError("laser E0 must be non-negative");
  if (!(laser.L > 0.0)) throw ConfigurationError("laser L must be positive");
  if (!(laser.q_z > 0.0)) throw ConfigurationError("laser q_z must be positive");
  const double period = 2.0 * k::pi / laser.omega();
  if (!(dt > 0.0)) throw ConfigurationError("dt must be positive");
  if (dt > period / 64.0 * (1.0 + 1e-12)) {
    throw ConfigurationError("dt must not exceed T/64 (T = " + std::to_string(period) + " s)");
  }
  const double t_int = laser.interaction_time(kin);
  for (double t : snapshots) {
    if (t < 0.0 || t > t_int * (1.0 + 1e-12)) {
      throw ConfigurationError("snapshot time outside the interaction window");
    }
  }
}

std::vector<double> effective_potential(const LaserField& laser, const Kinematics& kin,
                                        std::span<const double> zeta, double t) {
  std::vector<double> v(zeta.size(), 0.0);
  if (t < 0.0 || t > laser.interaction_time(kin) || laser.E0 == 0.0) return v;
  const double amp = k::e * kin.v0 * laser.E0 / laser.omega();
  const double phase = (laser.q_z * kin.v0 - laser.omega()) * t + laser.phi0;
  for (std::size_t i = 0; i < zeta.size(); ++i) v[i] = amp * std::sin(laser.q_z * zeta[i] + phase);
  return v;
}

namespace {

std::vector<double> zeta_axis(const GridSpec& g) {
  std::vector<double> z(g.N);
  for (std::size_t i = 0; i < g.N; ++i) z[i] = g.zeta(i);
  return z;
}

// exp(-i E(p) tau / hbar) on FFT bins, with an optional scale folded in.
std::vector<cplx> kinetic_phase(const GridSpec& g, const Kinematics& kin, double tau, double scale) {
  std::vector<cplx> f(g.N);
  const double a = tau / (2.0 * kin.m_star * k::hbar);
  for (std::size_t i = 0; i < g.N; ++i) {
    const double p = g.p_offset(i);
    f[i] = std::polar(scale, -a * p * p);
  }
  return f;
}

// exp(-i V(zeta, t) dt / hbar) with V evaluated through precomputed sin/cos(q zeta).
class PotentialPhase {
 public:
  PotentialPhase(const LaserField& laser, const Kinematics& kin, const GridSpec& g)
      : laser_(laser), kin_(kin) {
    const auto z = zeta_axis(g);
    sin_qz_.resize(g.N);
    cos_qz_.resize(g.N);
    for (std::size_t i = 0; i < g.N; ++i) {
      sin_qz_[i] = std::sin(laser.q_z * z[i]);
      cos_qz_[i] = std::cos(laser.q_z * z[i]);
    }
    amp_ = k::e * kin.v0 * laser.E0 / laser.omega();
    static_ = std::abs(laser.q_z * kin.v0 - laser.omega()) * laser.interaction_time(kin) < 1e-12;
  }

  // Fills `out` with the phase factor (times `scale`) for the step centred at t_mid.
  void fill(double t_mid, double dt, double scale, std::vector<cplx>& out) {
    const bool on = t_mid >= 0.0 && t_mid <= laser_.interaction_time(kin_);
    const double a = on ? amp_ : 0.0;
    const double phase = (laser_.q_z * kin_.v0 - laser_.omega()) * t_mid + laser_.phi0;
    if (static_ && cached_ && a == cached_amp_ && dt == cached_dt_ && scale == cached_scale_) {
      return;
    }
    const double s1 = std::sin(phase), c1 = std::cos(phase);
    const double w = -a * dt / k::hbar;
    out.resize(sin_qz_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::polar(scale, w * (sin_qz_[i] * c1 + cos_qz_[i] * s1));
    }
    cached_ = true;
    cached_amp_ = a;
    cached_dt_ = dt;
    cached_scale_ = scale;
  }

 private:
  LaserField laser_;
  Kinematics kin_;
  std::vector<double> sin_qz_, cos_qz_;
  double amp_ = 0.0;
  bool static_ = false;
  bool cached_ = false;
  double cached_amp_ = 0.0, cached_dt_ = 0.0, cached_scale_ = 0.0;
};

void multiply(std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

}  // namespace

Wavefunction step(const Wavefunction& psi, const LaserField& laser, const Kinematics& kin,
                  double t, double dt) {
  check_aliasing(psi, "step");
  const auto& g = psi.grid;
  const double inv_n = 1.0 / static_cast<double>(g.N);
  const auto half = kinetic_phase(g, kin, 0.5 * dt, 1.0);
  const auto half_scaled = kinetic_phase(g, kin, 0.5 * dt, inv_n);
  PotentialPhase pot(laser, kin, g);
  std::vector<cplx> vphase;
  pot.fill(t + 0.5 * dt, dt, inv_n, vphase);

  std::vector<cplx> a = psi.samples;
  fft::forward(a);
  multiply(a, half);
  fft::backward(a);
  multiply(a, vphase);
  fft::forward(a);
  multiply(a, half_scaled);
  fft::backward(a);

  Wavefunction out = psi;
  out.samples = std::move(a);
  out.t_elapsed += dt;
  return out;
}

InteractionResult run_interaction(const Wavefunction& psi, const Scenario& scenario,
                                  const Kinematics& kin) {
  scenario.validate(kin);
  if (psi.grid.N != scenario.grid.N || psi.grid.z_span != scenario.grid.z_span) {
    throw ConfigurationError("wavefunction grid does not match the scenario grid");
  }
  check_aliasing(psi, "run_interaction");
  const auto& g = psi.grid;
  const double t_int = scenario.laser.interaction_time(kin);
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_int / scenario.dt - 1e-9));
  const double dt = t_int / static_cast<double>(n_steps);
  const double inv_n = 1.0 / static_cast<double>(g.N);

  const auto half = kinetic_phase(g, kin, 0.5 * dt, 1.0);
  const auto full = kinetic_phase(g, kin, dt, 1.0);
  const auto half_scaled = kinetic_phase(g, kin, 0.5 * dt, inv_n);
  PotentialPhase pot(scenario.laser, kin, g);
  std::vector<cplx> vphase;

  // Snapshot requests mapped to step counts.
  std::vector<std::pair<std::size_t, std::size_t>> snap_at;  // (step count, request index)
  for (std::size_t s = 0; s < scenario.snapshots.size(); ++s) {
    const auto n = static_cast<std::size_t>(std::llround(scenario.snapshots[s] / dt));
    snap_at.emplace_back(std::min(n, n_steps), s);
  }
  std::sort(snap_at.begin(), snap_at.end());

  InteractionResult res;
  res.steps = n_steps;
  res.dt = dt;
  res.snapshots.resize(scenario.snapshots.size());
  std::size_t next_snap = 0;
  auto emit_position_state = [&](const std::vector<cplx>& mom, double t_elapsed) {
    Wavefunction w = psi;
    w.samples = mom;
    multiply(w.samples, half_scaled);
    fft::backward(w.samples);
    w.t_elapsed = psi.t_elapsed + t_elapsed;
    return w;
  };
  while (next_snap < snap_at.size() && snap_at[next_snap].first == 0) {
    res.snapshots[snap_at[next_snap++].second] = psi;
  }

  // State kept in unnormalized momentum space between potential kicks.
  std::vector<cplx> a = psi.samples;
  fft::forward(a);
  for (std::size_t n = 0; n < n_steps; ++n) {
    multiply(a, n == 0 ? half : full);
    fft::backward(a);
    pot.fill((static_cast<double>(n) + 0.5) * dt, dt, inv_n, vphase);
    multiply(a, vphase);
    fft::forward(a);
    const std::size_t done = n + 1;
    while (next_snap < snap_at.size() && snap_at[next_snap].first == done) {
      res.snapshots[snap_at[next_snap++].second] =
          emit_position_state(a, static_cast<double>(done) * dt);
    }
  }
  res.final_state = emit_position_state(a, static_cast<double>(n_steps) * dt);
  check_aliasing(res.final_state, "run_interaction");
  return res;
}

Wavefunction prepare_entrance(const BeamParams& beam, const GridSpec& grid, const Kinematics& kin) {
  return drift(gaussian_waist(beam, grid, kin), beam.drift_time(kin), kin);
}

}  // namespace qew
