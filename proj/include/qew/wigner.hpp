#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qew/wavepacket.hpp"

namespace qew {

/// Normalization of stored values. `Unit` integrates to one over (z, p);
/// `HbarHalf` multiplies by hbar/2, the display normalization used in some
/// of the literature. Marginal identities hold only for `Unit`.
enum class WignerNorm { Unit, HbarHalf };

struct WignerGrid {
  std::size_t nz = 0;
  std::size_t np = 0;
  std::vector<double> values;  // row-major [nz x np]
  std::vector<double> z_axis;  // comoving zeta, m
  std::vector<double> p_axis;  // absolute momentum, kg m/s
  double dz = 0.0;             // row spacing (includes stride)
  double dp = 0.0;             // column spacing (includes stride)
  WignerNorm norm = WignerNorm::Unit;

  double at(std::size_t iz, std::size_t ip) const { return values[iz * np + ip]; }
  double total() const;  // sum W dz dp
};

struct WignerOptions {
  std::size_t z_stride = 1;
  std::size_t p_stride = 1;
  std::optional<double> z_min, z_max;  // comoving crop, m
  std::optional<double> p_min, p_max;  // crop on p - p0, kg m/s
  bool allow_large = false;            // lift the 1e8-cell guard
};

inline constexpr std::size_t kWignerCellLimit = 100'000'000;

/// Wigner function from the autocorrelation psi*(z - s/2) psi(z + s/2),
/// Fourier transformed over s on every selected row. Half-grid samples come
/// from band-limited (Fourier) interpolation, so marginals reproduce
/// |psi(z)|^2 and |psi(p)|^2 to rounding at full resolution.
/// Throws ConfigurationError above kWignerCellLimit cells unless allowed,
/// or if the imaginary residue exceeds 1e-10 of the peak.
WignerGrid wigner(const Wavefunction& psi, const WignerOptions& opt = {});

/// 2 Re W_ab, the interference term between two states on the same grid.
WignerGrid wigner_interference(const Wavefunction& a, const Wavefunction& b,
                               const WignerOptions& opt = {});

/// Density over p: sum_z W dz.
std::vector<double> marginal_p(const WignerGrid& w);
/// Density over z: sum_p W dp.
std::vector<double> marginal_z(const WignerGrid& w);

/// Copy with values converted to the requested normalization.
WignerGrid with_norm(const WignerGrid& w, WignerNorm norm);

}  // namespace qew
