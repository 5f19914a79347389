#include "qew/text_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qew/units.hpp"

namespace qew::io {

using units::format;

std::string header(const std::string& command, const RunConfig& cfg) {
  std::string out = "# qewsim " + command + "\n# resolved configuration (SI units)\n";
  std::istringstream in(cfg.to_ini());
  std::string line;
  while (std::getline(in, line)) out += "# " + line + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string wavefunction_table(const std::string& head, const Wavefunction& psi) {
  std::string out = head;
  out += "# N=" + std::to_string(psi.grid.N) + " dz=" + format(psi.grid.dz()) +
         " p0=" + format(psi.p0) + " t_elapsed=" + format(psi.t_elapsed) + "\n";
  out += "# columns: Re(psi) Im(psi) [m^-1/2], zeta_i = (i - N/2) dz\n";
  for (const auto& v : psi.samples) out += format(v.real()) + " " + format(v.imag()) + "\n";
  return out;
}

std::string spectrum_table(const std::string& head, const Spectrum& spec, SpectrumAxis axis,
                           double v0) {
  std::string out = head;
  out += "# spectrum p0=" + format(spec.p0) + " fingerprint=" + spec.fingerprint + "\n";
  if (axis == SpectrumAxis::Energy) {
    out += "# columns: E-E0 [J] (v0 (p - p0)), density [1/J]\n";
    for (std::size_t i = 0; i < spec.p_axis.size(); ++i) {
      out += format(v0 * (spec.p_axis[i] - spec.p0)) + " " + format(spec.density[i] / v0) + "\n";
    }
  } else {
    out += "# columns: p [kg m/s], density [s/(kg m)]\n";
    for (std::size_t i = 0; i < spec.p_axis.size(); ++i) {
      out += format(spec.p_axis[i]) + " " + format(spec.density[i]) + "\n";
    }
  }
  return out;
}

std::string wigner_table(const std::string& head, const WignerGrid& w) {
  std::string out = head;
  out += "# N_z=" + std::to_string(w.nz) + " N_p=" + std::to_string(w.np) + " dz=" + format(w.dz) +
         " dp=" + format(w.dp) + " z0=" + format(w.z_axis.empty() ? 0.0 : w.z_axis.front()) +
         " p0=" + format(w.p_axis.empty() ? 0.0 : w.p_axis.front()) +
         " norm=" + (w.norm == WignerNorm::HbarHalf ? "hbar_half" : "unit") + "\n";
  out += "# row i: z = z0 + i dz; column j: p = p0 + j dp\n";
  for (std::size_t i = 0; i < w.nz; ++i) {
    for (std::size_t j = 0; j < w.np; ++j) {
      if (j) out += ' ';
      out += format(w.at(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string diagram_grid(const std::string& head, const PhaseDiagram& d, const std::string& field) {
  std::string out = head;
  out += "# phase diagram field=" + field + " beta=" + format(d.beta) +
         " lambda=" + format(d.lambda) + "\n";
  out += "# sigma_z0 axis [m] (columns, log-spaced):";
  for (double s : d.sigma_z0_axis) out += " " + format(s);
  out += "\n# L_D axis [m] (rows):";
  for (double l : d.L_D_axis) out += " " + format(l);
  out += "\n";
  if (field == "label") out += "# labels: 0 = Acceleration, 1 = PINEM, 2 = APINEM\n";
  for (std::size_t i = 0; i < d.n_LD(); ++i) {
    for (std::size_t j = 0; j < d.n_sigma(); ++j) {
      if (j) out += ' ';
      const auto k = d.index(i, j);
      if (field == "damping") {
        out += format(d.damping[k]);
      } else if (field == "gamma") {
        out += format(d.gamma[k]);
      } else {
        out += std::to_string(static_cast<int>(d.labels[k]));
      }
    }
    out += '\n';
  }
  return out;
}

std::string contour_table(const std::string& head, const std::vector<Polyline>& lines) {
  std::string out = head;
  out += "# polylines=" + std::to_string(lines.size()) + "\n# columns: sigma_z0 [m], L_D [m]\n";
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (n) out += '\n';
    for (std::size_t i = 0; i < lines[n].sigma_z0.size(); ++i) {
      out += format(lines[n].sigma_z0[i]) + " " + format(lines[n].L_D[i]) + "\n";
    }
  }
  return out;
}

std::string sweep_table(const std::string& head, const SweepResult& r) {
  std::string out = head;
  out += "# columns: beta_lambda[m] regime measured[kg m/s] predicted_apinem[kg m/s] "
         "predicted_pinem[kg m/s] confidence ok error\n";
  for (const auto& p : r.points) {
    out += format(p.beta_lambda) + " " + to_string(p.regime) + " " + format(p.measured) + " " +
           format(p.predicted_apinem) + " " + format(p.predicted_pinem) + " " +
           format(p.confidence) + " " + (p.ok ? "1" : "0") + " " +
           (p.error.empty() ? "-" : "\"" + p.error + "\"") + "\n";
  }
  return out;
}

std::string key_values(const std::string& head, const KeyValues& kv) {
  std::string out = head;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace qew::io
