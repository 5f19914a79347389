#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qew/analysis.hpp"
#include "qew/config.hpp"
#include "qew/regimes.hpp"
#include "qew/wavepacket.hpp"
#include "qew/wigner.hpp"

namespace qew::io {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Comment block opening every output file: tool, command, and the full
/// resolved configuration in reloadable INI form.
std::string header(const std::string& command, const RunConfig& cfg);

/// Writes bytes verbatim (LF line endings); throws std::runtime_error.
void write_file(const std::string& path, const std::string& content);

/// Grid metadata line then one "Re Im" row per sample.
std::string wavefunction_table(const std::string& head, const Wavefunction& psi);

/// Two columns: absolute p and density, or relative energy v0 (p - p0) and
/// density per joule.
std::string spectrum_table(const std::string& head, const Spectrum& spec, SpectrumAxis axis,
                           double v0);

/// Metadata line (N_z, N_p, dz, dp, z0, p0) then one text row per z.
std::string wigner_table(const std::string& head, const WignerGrid& w);

/// Row per L_D, column per sigma_z0, of the selected field.
std::string diagram_grid(const std::string& head, const PhaseDiagram& d, const std::string& field);

/// Polylines as "sigma_z0 L_D" rows, separated by blank lines.
std::string contour_table(const std::string& head, const std::vector<Polyline>& lines);

std::string sweep_table(const std::string& head, const SweepResult& r);

/// "key = value" lines.
std::string key_values(const std::string& head, const KeyValues& kv);

}  // namespace qew::io
