#include "qew/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/fft.hpp"
#include "qew/parallel.hpp"
#include "qew/perturbation.hpp"

namespace qew {

namespace k = constants;

double Spectrum::integral() const {
  double s = 0.0;
  for (double v : density) s += v;
  return s * dp();
}

namespace {

// First moment relative to the carrier, free of the cancellation against p0.
double offset_mean(const Spectrum& s) {
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < s.density.size(); ++i) {
    s0 += s.density[i];
    s1 += s.density[i] * (s.p_axis[i] - s.p0);
  }
  return s1 / s0;
}

}  // namespace

double Spectrum::mean() const { return p0 + offset_mean(*this); }

double Spectrum::stddev() const {
  const double m = mean() - p0;
  double s0 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double d = p_axis[i] - p0 - m;
    s0 += density[i];
    s2 += density[i] * d * d;
  }
  return std::sqrt(s2 / s0);
}

Spectrum momentum_spectrum(const Wavefunction& psi) {
  const double edge = momentum_edge_probability(psi);
  if (edge >= 1e-6) {
    throw AliasingError("momentum_spectrum: probability " + std::to_string(edge) +
                        " at the momentum window edge");
  }
  Spectrum s;
  s.density = momentum_density(psi);
  s.p0 = psi.p0;
  const auto& g = psi.grid;
  s.p_axis.resize(g.N);
  for (std::size_t i = 0; i < g.N; ++i) {
    s.p_axis[i] = psi.p0 + (static_cast<double>(i) - static_cast<double>(g.N / 2)) * g.dp();
  }
  std::ostringstream fp;
  fp.precision(17);
  fp << "N=" << g.N << " z_span=" << g.z_span << " p0=" << psi.p0 << " t=" << psi.t_elapsed;
  s.fingerprint = fp.str();
  return s;
}

double mean_shift(const Spectrum& spec, const Spectrum& spec0) {
  const bool same = spec.p_axis.size() == spec0.p_axis.size() && !spec.p_axis.empty() &&
                    std::abs(spec.p_axis.front() - spec0.p_axis.front()) <= 1e-9 * spec.dp() &&
                    std::abs(spec.dp() - spec0.dp()) <= 1e-12 * spec.dp();
  if (!same) throw ConfigurationError("mean_shift: spectra are on different momentum axes");
  return (offset_mean(spec) - offset_mean(spec0)) + (spec.p0 - spec0.p0);
}

double SidebandWeights::sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

SidebandWeights sideband_weights(const Spectrum& spec, double spacing, int n_max, double sigma_p0) {
  if (!(spacing > 4.0 * sigma_p0)) {
    throw ConfigurationError(
        "sideband_weights: spacing must exceed 4 sigma_p0; sidebands are unresolvable when the "
        "large-recoil condition (energy spread below hbar omega) fails");
  }
  if (n_max < 0) throw ConfigurationError("sideband_weights: n_max must be >= 0");
  SidebandWeights w;
  w.n_max = n_max;
  w.weights.assign(static_cast<std::size_t>(2 * n_max + 1), 0.0);
  const double dp = spec.dp();
  for (int n = -n_max; n <= n_max; ++n) {
    const double a = spec.p0 + (n - 0.5) * spacing;
    const double b = spec.p0 + (n + 0.5) * spacing;
    double s = 0.0;
    for (std::size_t i = 0; i < spec.density.size(); ++i) {
      const double lo = std::max(a, spec.p_axis[i] - 0.5 * dp);
      const double hi = std::min(b, spec.p_axis[i] + 0.5 * dp);
      if (hi > lo) s += spec.density[i] * (hi - lo);
    }
    w.weights[static_cast<std::size_t>(n + n_max)] = s;
  }
  return w;
}

namespace {

// Vertex offset of the parabola through (-1, a), (0, b), (1, c).
double parabolic_offset(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  return den == 0.0 ? 0.0 : 0.5 * (a - c) / den;
}

std::pair<std::size_t, std::size_t> support(const std::vector<double>& rho, double rel) {
  const double peak = *std::max_element(rho.begin(), rho.end());
  std::size_t lo = 0, hi = rho.size() - 1;
  while (lo < hi && rho[lo] <= rel * peak) ++lo;
  while (hi > lo && rho[hi] <= rel * peak) --hi;
  return {lo, hi};
}

// |sum rho_i exp(-2 pi i nu (x_i - centre)) dx| over [lo, hi].
struct FourierProbe {
  const std::vector<double>& x;
  const std::vector<double>& rho;
  std::size_t lo, hi;
  double centre, dx;

  double operator()(double nu) const {
    double re = 0.0, im = 0.0;
    const double w = -2.0 * k::pi * nu;
    // Recurrence for exp(i w (x - centre)) on the uniform axis.
    const cplx stepf = std::polar(1.0, w * dx);
    cplx e;
    for (std::size_t i = lo; i <= hi; ++i) {
      if (((i - lo) & 255) == 0) e = std::polar(1.0, w * (x[i] - centre));  // resync recurrence
      re += rho[i] * e.real();
      im += rho[i] * e.imag();
      e *= stepf;
    }
    return std::hypot(re, im) * dx;
  }
};

struct PeakScan {
  bool detected = false;
  double nu = 0.0;
  double confidence = 0.0;
  double support_width = 0.0;
};

PeakScan fourier_peak(const std::vector<double>& x, const std::vector<double>& rho, double min_conf) {
  PeakScan out;
  if (x.size() < 8) return out;
  const auto [lo, hi] = support(rho, 1e-6);
  if (hi <= lo + 4) return out;
  const double dx = x[1] - x[0];
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    s0 += rho[i];
    s1 += rho[i] * x[i];
  }
  const double centre = s1 / s0;
  for (std::size_t i = lo; i <= hi; ++i) s2 += rho[i] * (x[i] - centre) * (x[i] - centre);
  const double sigma = std::sqrt(s2 / s0);
  const FourierProbe F{x, rho, lo, hi, centre, dx};
  const double width = x[hi] - x[lo];
  out.support_width = width;
  const double f0 = F(0.0);
  const double dnu = 1.0 / (8.0 * width);
  const double nu_max = 1.0 / (4.0 * dx);
  const auto n_scan = static_cast<std::size_t>(nu_max / dnu);
  if (n_scan < 4) return out;
  std::vector<double> mag(n_scan + 1);
  for (std::size_t j = 0; j <= n_scan; ++j) mag[j] = F(static_cast<double>(j) * dnu);

  // Envelope lobe: up to the first local minimum, and at least 0.5 / sigma.
  std::size_t first_min = n_scan;
  for (std::size_t j = 1; j < n_scan; ++j) {
    if (mag[j] < mag[j - 1] && mag[j] <= mag[j + 1]) {
      first_min = j;
      break;
    }
  }
  const auto sigma_cut = static_cast<std::size_t>(std::ceil(0.5 / sigma / dnu));
  const std::size_t start = std::max(first_min, sigma_cut);
  if (start >= n_scan) return out;
  std::size_t best = start;
  for (std::size_t j = start; j <= n_scan; ++j) {
    if (mag[j] > mag[best]) best = j;
  }
  if (best == start || best == n_scan) return out;

  // Golden-section refinement on [best - 1, best + 1].
  double a = (static_cast<double>(best) - 1.0) * dnu, b = (static_cast<double>(best) + 1.0) * dnu;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = F(c), fd = F(d);
  for (int it = 0; it < 60 && (b - a) > 1e-12 * b; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = F(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = F(d);
    }
  }
  out.nu = 0.5 * (a + b);
  out.confidence = 2.0 * F(out.nu) / f0;
  out.detected = out.confidence >= min_conf;
  return out;
}

}  // namespace

std::optional<double> sideband_spacing_estimate(const Spectrum& spec, double rel_threshold) {
  const auto& r = spec.density;
  if (r.size() < 5) return std::nullopt;
  const auto c = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  const double thr = rel_threshold * r[c];
  auto is_peak = [&](std::size_t i) {
    return i > 0 && i + 1 < r.size() && r[i] > thr && r[i] >= r[i - 1] && r[i] > r[i + 1];
  };
  auto refine = [&](std::size_t i) {
    const double off = parabolic_offset(std::log(r[i - 1]), std::log(r[i]), std::log(r[i + 1]));
    return spec.p_axis[i] + off * spec.dp();
  };
  std::optional<std::size_t> right, left;
  for (std::size_t i = c + 1; i + 1 < r.size(); ++i) {
    if (is_peak(i)) {
      right = i;
      break;
    }
  }
  for (std::size_t i = c; i-- > 1;) {
    if (is_peak(i)) {
      left = i;
      break;
    }
  }
  if (!right || !left) return std::nullopt;
  if (r[*left - 1] <= 0.0 || r[*right + 1] <= 0.0) return std::nullopt;
  return 0.5 * (refine(*right) - refine(*left));
}

FringeEstimate fringe_spacing_estimate(const Spectrum& spec) {
  FringeEstimate est;
  est.period_peak_to_peak = std::numeric_limits<double>::quiet_NaN();
  const auto scan = fourier_peak(spec.p_axis, spec.density, 1e-3);
  if (!scan.detected) return est;
  est.detected = true;
  est.period = 1.0 / scan.nu;
  est.confidence = scan.confidence;
  est.support_periods = scan.support_width * scan.nu;

  // Cross-check: mean spacing of density maxima above 5% of the peak.
  const auto& r = spec.density;
  const double peak = *std::max_element(r.begin(), r.end());
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (r[i] > 0.05 * peak && r[i] >= r[i - 1] && r[i] > r[i + 1]) {
      const double off = parabolic_offset(r[i - 1], r[i], r[i + 1]);
      maxima.push_back(spec.p_axis[i] + off * spec.dp());
    }
  }
  if (maxima.size() >= 3) {
    est.period_peak_to_peak = (maxima.back() - maxima.front()) / static_cast<double>(maxima.size() - 1);
  }
  return est;
}

PeriodEstimate dominant_period(const std::vector<double>& axis, const std::vector<double>& density) {
  PeriodEstimate out;
  const auto scan = fourier_peak(axis, density, 0.0);
  if (!scan.detected || scan.nu <= 0.0) return out;
  out.detected = true;
  out.period = 1.0 / scan.nu;
  out.confidence = scan.confidence;
  return out;
}

double visibility(const Spectrum& spec, double period) {
  if (!(period > 2.0 * spec.dp())) {
    throw ConfigurationError("visibility: period not resolvable on the momentum axis");
  }
  const auto [lo, hi] = support(spec.density, 1e-12);
  const double c = spec.mean();
  const FourierProbe F{spec.p_axis, spec.density, lo, hi, c, spec.dp()};
  return std::clamp(2.0 * F(1.0 / period) / F(0.0), 0.0, 1.0);
}

Spectrum convolve_gaussian(const Spectrum& spec, double sigma_p) {
  if (sigma_p < 0.0) throw DomainError("convolution width must be non-negative");
  if (sigma_p == 0.0) return spec;
  const std::size_t n = spec.density.size();
  std::vector<cplx> f(spec.density.begin(), spec.density.end());
  fft::forward(f);
  const double span = spec.dp() * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double nu = static_cast<double>(fft::signed_bin(i, n)) / span;
    f[i] *= std::exp(-2.0 * k::pi * k::pi * sigma_p * sigma_p * nu * nu) / static_cast<double>(n);
  }
  fft::backward(f);
  Spectrum out = spec;
  for (std::size_t i = 0; i < n; ++i) out.density[i] = std::max(f[i].real(), 0.0);
  return out;
}

InteractionResult simulate(const Scenario& scenario, const Kinematics& kin) {
  const auto entrance = prepare_entrance(scenario.beam, scenario.grid, kin);
  return run_interaction(entrance, scenario, kin);
}

std::vector<double> phase_draws(const Scenario& scenario, const EnsembleParams& ens) {
  const double phi = scenario.laser.phi0;
  if (ens.uniform_phase) {
    const std::size_t n = std::max<std::size_t>(ens.n_draws, 1);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = phi + 2.0 * k::pi * static_cast<double>(i) / static_cast<double>(n);
    }
    return out;
  }
  if (ens.sigma_t_jitter <= 0.0 || ens.analytic_phase) return {phi};
  const double width = scenario.laser.omega() * ens.sigma_t_jitter;
  std::vector<double> out(std::max<std::size_t>(ens.n_draws, 1));
  for (std::size_t i = 0; i < out.size(); ++i) {
    // One stream per draw index keeps the result independent of scheduling.
    std::seed_seq seq{static_cast<std::uint32_t>(ens.seed), static_cast<std::uint32_t>(ens.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> dist(phi, width);
    out[i] = dist(rng);
  }
  return out;
}

Spectrum ensemble_average(const Scenario& scenario, const Kinematics& kin, const EnsembleParams& ens) {
  if (ens.sigma_E_part < 0.0 || ens.sigma_t_jitter < 0.0) {
    throw DomainError("ensemble jitters must be non-negative");
  }
  scenario.validate(kin);
  Spectrum avg;
  if (ens.analytic_phase && ens.sigma_t_jitter > 0.0 && !ens.uniform_phase) {
    const auto entrance = prepare_entrance(scenario.beam, scenario.grid, kin);
    const auto st = first_order_state(entrance, scenario.laser, kin);
    const auto m0 = to_momentum(st.psi0);
    const auto mp = to_momentum(st.plus);
    const auto mm = to_momentum(st.minus);
    const double s = scenario.laser.omega() * ens.sigma_t_jitter;
    const cplx c1 = std::polar(std::exp(-0.5 * s * s), scenario.laser.phi0);
    const cplx c2 = std::polar(std::exp(-2.0 * s * s), 2.0 * scenario.laser.phi0);
    avg = momentum_spectrum(st.psi0);
    const std::size_t n = m0.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::norm(m0[i]) +
                       2.0 * (std::conj(m0[i]) * (c1 * mp[i] - std::conj(c1) * mm[i])).real() +
                       std::norm(mp[i]) + std::norm(mm[i]) -
                       2.0 * (c2 * mp[i] * std::conj(mm[i])).real();
      avg.density[(i + n / 2) % n] = std::max(v, 0.0);
    }
    const double norm = avg.integral();
    for (auto& v : avg.density) v /= norm;
  } else {
    const auto phases = phase_draws(scenario, ens);
    const auto entrance = prepare_entrance(scenario.beam, scenario.grid, kin);
    std::vector<Spectrum> runs(phases.size());
    parallel_for(phases.size(), [&](std::size_t i) {
      Scenario sc = scenario;
      sc.laser.phi0 = phases[i];
      runs[i] = momentum_spectrum(run_interaction(entrance, sc, kin).final_state);
    });
    avg = runs.front();
    for (std::size_t r = 1; r < runs.size(); ++r) {
      for (std::size_t i = 0; i < avg.density.size(); ++i) avg.density[i] += runs[r].density[i];
    }
    if (runs.size() > 1) {
      for (auto& v : avg.density) v /= static_cast<double>(runs.size());
    }
  }
  return convolve_gaussian(avg, ens.sigma_E_part / kin.v0);
}

bool SweepResult::any_failed() const {
  return std::any_of(points.begin(), points.end(), [](const SweepPoint& p) { return !p.ok; });
}

SweepResult sweep_fringe_vs_wavelength(const SweepSpec& spec) {
  const auto kin = kinematics_from_beta(spec.beam.beta);
  SweepResult res;
  res.points.resize(spec.beta_lambdas.size());
  parallel_for(spec.beta_lambdas.size(), [&](std::size_t i) {
    SweepPoint& pt = res.points[i];
    pt.beta_lambda = spec.beta_lambdas[i];
    try {
      const double lambda = pt.beta_lambda / kin.beta;
      const auto report = classify(spec.beam, lambda);
      pt.regime = report.label;
      const auto th_ps = photon_scale(lambda, kin);
      pt.predicted_pinem = th_ps.recoil;
      pt.predicted_apinem = apinem_fringe_spacing(spec.beam, kin, pt.beta_lambda).delta_p;

      Scenario sc;
      sc.beam = spec.beam;
      sc.laser = make_laser(lambda, field_for_upsilon(spec.upsilon, spec.L, th_ps.omega), spec.L,
                            spec.beam.phi0, kin);
      sc.grid = spec.grid ? *spec.grid : default_grid(spec.beam, kin, pt.beta_lambda);
      sc.dt = default_dt(sc.laser);
      const auto spectrum = momentum_spectrum(simulate(sc, kin).final_state);

      switch (pt.regime) {
        case Regime::PINEM: {
          const auto s = sideband_spacing_estimate(spectrum);
          if (!s) throw ConfigurationError("no resolved sidebands");
          pt.measured = *s;
          pt.confidence = 1.0;
          break;
        }
        case Regime::APINEM: {
          const auto f = fringe_spacing_estimate(spectrum);
          if (!f.detected) throw ConfigurationError("no fringes detected");
          pt.measured = f.period;
          pt.confidence = f.confidence;
          break;
        }
        case Regime::Acceleration:
          throw ConfigurationError("acceleration regime has no spectral period");
      }
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  });

  double sxy = 0.0, sxx = 0.0, sinv = 0.0, sinv2 = 0.0;
  for (const auto& pt : res.points) {
    if (!pt.ok) continue;
    if (pt.regime == Regime::APINEM) {
      sxy += pt.beta_lambda * pt.measured;
      sxx += pt.beta_lambda * pt.beta_lambda;
      ++res.n_apinem;
    } else if (pt.regime == Regime::PINEM) {
      sinv += pt.measured / pt.beta_lambda;
      sinv2 += 1.0 / (pt.beta_lambda * pt.beta_lambda);
      ++res.n_pinem;
    }
  }
  if (res.n_apinem > 0) res.fit_slope = sxy / sxx;
  if (res.n_pinem > 0) res.fit_inverse_constant = sinv / sinv2;
  res.predicted_slope =
      spec.beam.sigma_p0() / analytic_sigma_z(spec.beam.sigma_z0, spec.beam.drift_time(kin), kin);
  res.predicted_inverse_constant = 2.0 * k::pi * k::hbar;
  return res;
}

}  // namespace qew
