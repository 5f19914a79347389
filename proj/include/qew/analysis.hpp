#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qew/kinematics.hpp"
#include "qew/propagator.hpp"
#include "qew/regimes.hpp"
#include "qew/wavepacket.hpp"

namespace qew {

/// Probability density over an ascending, uniform momentum axis.
struct Spectrum {
  std::vector<double> p_axis;   // absolute momentum, kg m/s
  std::vector<double> density;  // 1 / (kg m/s)
  double p0 = 0.0;              // carrier momentum the axis is centred on
  std::string fingerprint;

  double dp() const { return p_axis.size() > 1 ? p_axis[1] - p_axis[0] : 0.0; }
  double integral() const;
  double mean() const;
  double stddev() const;
};

/// |psi(p)|^2 on the grid's conjugate axis. Throws AliasingError when the
/// state touches the momentum window edge.
Spectrum momentum_spectrum(const Wavefunction& psi);

/// Difference of first moments, mean(spec) - mean(spec0).
/// Throws ConfigurationError when the axes differ.
double mean_shift(const Spectrum& spec, const Spectrum& spec0);

struct SidebandWeights {
  int n_max = 0;
  std::vector<double> weights;  // orders -n_max..n_max
  double at(int order) const { return weights[static_cast<std::size_t>(order + n_max)]; }
  double sum() const;
};

/// Probability in windows of width `spacing` centred on p0 + n spacing.
/// Throws ConfigurationError when spacing <= 4 sigma_p0 (sidebands not
/// resolvable: the large-recoil condition fails).
SidebandWeights sideband_weights(const Spectrum& spec, double spacing, int n_max, double sigma_p0);

/// Spacing of resolved sideband peaks: the central maximum and the nearest
/// local maxima on either side, located by log-parabolic interpolation.
/// Empty when fewer than one sideband is visible on each side.
std::optional<double> sideband_spacing_estimate(const Spectrum& spec, double rel_threshold = 1e-4);

struct FringeEstimate {
  bool detected = false;
  double period = 0.0;             // kg m/s
  double confidence = 0.0;         // 2|F(1/period)| / |F(0)|
  double period_peak_to_peak = 0;  // cross-check from density maxima; NaN if unavailable
  double support_periods = 0.0;    // support width / period
};

/// Dominant modulation period from the peak of |F(nu)|, the Fourier
/// transform of the density over p, with the envelope lobe below
/// max(0.5/sigma_p, first minimum of |F|) masked out. A maximum sitting on
/// the mask edge, or weaker than 1e-3 of |F(0)|, reports no fringes.
FringeEstimate fringe_spacing_estimate(const Spectrum& spec);

/// Fourier-domain contrast 2|F(1/period)| / |F(0)|, clamped to [0, 1].
double visibility(const Spectrum& spec, double period);

/// Fourier peak of an arbitrary sampled density (used for spatial bunching).
struct PeriodEstimate {
  bool detected = false;
  double period = 0.0;
  double confidence = 0.0;
};
PeriodEstimate dominant_period(const std::vector<double>& axis, const std::vector<double>& density);

/// Gaussian convolution along p with rms width sigma_p (energy jitter
/// sigma_E / v0); sigma_p = 0 returns the input unchanged.
Spectrum convolve_gaussian(const Spectrum& spec, double sigma_p);

struct EnsembleParams {
  double sigma_E_part = 0.0;    // J
  double sigma_t_jitter = 0.0;  // s, entrance-time jitter
  std::size_t n_draws = 64;
  bool uniform_phase = false;   // phi0 on n_draws equally spaced points of [0, 2 pi)
  bool analytic_phase = false;  // first-order closed-form phase average
  std::uint64_t seed = 0;
};

/// Ensemble-measured spectrum: phase jitter by averaging runs over phi0
/// (Monte-Carlo with per-draw seeded streams, equally spaced quadrature for
/// uniform_phase, or the first-order closed form), then energy jitter by
/// Gaussian convolution.
Spectrum ensemble_average(const Scenario& scenario, const Kinematics& kin, const EnsembleParams& ens);

/// Phase draws used by ensemble_average; exposed for reproducibility checks.
std::vector<double> phase_draws(const Scenario& scenario, const EnsembleParams& ens);

struct SweepPoint {
  double beta_lambda = 0.0;
  Regime regime = Regime::Acceleration;
  double measured = 0.0;           // measured spectral period, kg m/s
  double predicted_apinem = 0.0;   // sigma_p0 beta_lambda / sigma_z(t_D)
  double predicted_pinem = 0.0;    // hbar omega / v0
  double confidence = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  // Line through the origin over APINEM points.
  std::size_t n_apinem = 0;
  double fit_slope = 0.0;
  double predicted_slope = 0.0;
  // delta_p = C / beta_lambda over PINEM points.
  std::size_t n_pinem = 0;
  double fit_inverse_constant = 0.0;
  double predicted_inverse_constant = 0.0;  // 2 pi hbar
  bool any_failed() const;
};

struct SweepSpec {
  BeamParams beam;
  double upsilon = 0.1;
  double L = 30e-6;
  std::vector<double> beta_lambdas;  // m
  std::optional<GridSpec> grid;      // default_grid per point when empty
};

/// One propagator run per beta lambda; the regime of each point selects the
/// estimator (sideband peaks for PINEM, Fourier fringes for APINEM). Failed
/// points are recorded and the sweep continues.
SweepResult sweep_fringe_vs_wavelength(const SweepSpec& spec);

/// Runs the scenario from the waist: drift by L_D, then the interaction.
InteractionResult simulate(const Scenario& scenario, const Kinematics& kin);

}  // namespace qew
