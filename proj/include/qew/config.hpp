#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qew/analysis.hpp"
#include "qew/kinematics.hpp"
#include "qew/propagator.hpp"
#include "qew/regimes.hpp"
#include "qew/wavepacket.hpp"
#include "qew/wigner.hpp"

namespace qew {

enum class SpectrumAxis { Momentum, Energy };
enum class PhaseMode { MonteCarlo, Uniform, Analytic };

/// Fully resolved run description in SI units.
struct RunConfig {
  // [beam]
  BeamParams beam;
  // [laser]
  std::vector<double> beta_lambdas;  // m; more than one only for sweeps
  std::optional<double> E0;          // V/m
  std::optional<double> upsilon;
  double L = 30e-6;
  double theta_bar = 0.0;
  // [grid]
  std::optional<std::size_t> N;
  std::optional<double> z_span;
  // [run]
  std::optional<double> dt;
  std::vector<double> snapshots;
  SpectrumAxis spectrum_axis = SpectrumAxis::Momentum;
  bool write_wigner = false;
  bool write_wavefunction = false;
  std::optional<std::size_t> wigner_z_stride, wigner_p_stride;
  std::optional<double> wigner_z_min, wigner_z_max;  // m, comoving
  std::optional<double> wigner_E_min, wigner_E_max;  // J, relative to the carrier
  WignerNorm wigner_norm = WignerNorm::Unit;
  DiagramRange diagram;
  // [ensemble]
  double sigma_E_part = 0.0;
  double sigma_t_jitter = 0.0;
  std::size_t n_draws = 64;
  PhaseMode phase_mode = PhaseMode::MonteCarlo;
  std::uint64_t seed = 0;

  Kinematics kinematics() const;
  double beta_lambda() const { return beta_lambdas.front(); }
  double lambda() const { return beta_lambda() / beam.beta; }
  /// Laser at the i-th beta lambda, E0 resolved from upsilon when needed.
  LaserField laser(std::size_t i = 0) const;
  GridSpec grid(std::size_t i = 0) const;
  Scenario scenario(std::size_t i = 0) const;
  EnsembleParams ensemble() const;
  SweepSpec sweep() const;

  /// INI text of every resolved value, in SI, suitable for reloading.
  std::string to_ini() const;
};

/// Parses the flat INI format ([beam], [laser], [grid], [run], [ensemble];
/// "key = value"; '#' or ';' comments). Collects every violation and throws
/// ConfigError listing them all.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace qew
