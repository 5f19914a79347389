#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qew/wavepacket.hpp"

namespace qew {

enum class Regime { Acceleration, PINEM, APINEM };

std::string to_string(Regime r);

struct RegimeReport {
  double Gamma0 = 0.0;
  double Gamma = 0.0;
  double damping = 1.0;  // exp(-Gamma^2 / 2)
  Regime label = Regime::Acceleration;
  double sigma_z_entrance = 0.0;
  /// hbar omega / v0 for PINEM, the interference fringe period for APINEM,
  /// empty for Acceleration.
  std::optional<double> predicted_spectral_period;
};

/// Regime from the entrance conditions alone:
///   Gamma < sqrt2             -> Acceleration
///   Gamma0 >= sqrt2           -> PINEM
///   Gamma0 < sqrt2 <= Gamma   -> APINEM
/// Ties at exactly sqrt2 go to the quantum side.
RegimeReport classify(const BeamParams& beam, double lambda);

/// Label rule on precomputed factors (shared with the phase diagram).
Regime label_for(double gamma0, double gamma);

struct Polyline {
  std::vector<double> sigma_z0;  // m
  std::vector<double> L_D;       // m
};

struct PhaseDiagram {
  std::vector<double> sigma_z0_axis;  // log-spaced, m
  std::vector<double> L_D_axis;       // linear, m
  // Row-major [L_D index][sigma index].
  std::vector<double> damping;
  std::vector<double> gamma;
  std::vector<Regime> labels;
  std::vector<Polyline> gamma_contour;   // Gamma = sqrt2
  std::vector<Polyline> gamma0_contour;  // Gamma0 = sqrt2
  double beta = 0.0;
  double lambda = 0.0;

  std::size_t n_sigma() const { return sigma_z0_axis.size(); }
  std::size_t n_LD() const { return L_D_axis.size(); }
  std::size_t index(std::size_t iLD, std::size_t isig) const { return iLD * n_sigma() + isig; }
};

struct DiagramRange {
  double sigma_min = 0.01e-6;
  double sigma_max = 1.0e-6;
  double L_D_min = -1.0;
  double L_D_max = 1.0;
  std::size_t n_sigma = 256;
  std::size_t n_LD = 256;
};

/// Damping and labels over (sigma_z0, L_D), with the two sqrt2 boundaries
/// extracted by marching squares. Each axis needs either n >= 16 points over
/// a positive width, or exactly one point over a zero width (line scan).
PhaseDiagram phase_diagram(const DiagramRange& range, double beta, double lambda);

}  // namespace qew
