#pragma once

#include <numbers>

// CODATA 2018 values, SI units.
namespace qew::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 299792458.0;                  // m/s (exact)
inline constexpr double m_e = 9.1093837015e-31;           // kg
inline constexpr double e = 1.602176634e-19;              // C (exact)
inline constexpr double h = 6.62607015e-34;               // J s (exact)
inline constexpr double hbar = h / (2.0 * pi);            // J s
inline constexpr double lambda_C = h / (m_e * c);         // Compton wavelength, m
inline constexpr double eV = e;                           // J per eV

}  // namespace qew::constants
