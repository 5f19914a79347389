#include "qew/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/units.hpp"

namespace qew {

using units::Dim;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

struct KeySpec {
  std::string_view section;
  std::string_view key;
};

constexpr KeySpec kKeys[] = {
    {"beam", "beta"},
    {"beam", "sigma_z0"},
    {"beam", "sigma_t0"},
    {"beam", "L_D"},
    {"beam", "phi0"},
    {"laser", "lambda"},
    {"laser", "beta_lambda"},
    {"laser", "E0"},
    {"laser", "upsilon"},
    {"laser", "L"},
    {"laser", "theta_bar"},
    {"grid", "N"},
    {"grid", "z_span"},
    {"run", "dt"},
    {"run", "snapshots"},
    {"run", "spectrum_axis"},
    {"run", "wigner"},
    {"run", "wavefunction"},
    {"run", "wigner_z_stride"},
    {"run", "wigner_p_stride"},
    {"run", "wigner_z_min"},
    {"run", "wigner_z_max"},
    {"run", "wigner_E_min"},
    {"run", "wigner_E_max"},
    {"run", "wigner_norm"},
    {"run", "diagram_sigma_min"},
    {"run", "diagram_sigma_max"},
    {"run", "diagram_L_D_min"},
    {"run", "diagram_L_D_max"},
    {"run", "diagram_n_sigma"},
    {"run", "diagram_n_LD"},
    {"ensemble", "sigma_E_part"},
    {"ensemble", "sigma_t_jitter"},
    {"ensemble", "n_draws"},
    {"ensemble", "phase_mode"},
    {"ensemble", "seed"},
};

bool known_section(const std::string& s) {
  return s == "beam" || s == "laser" || s == "grid" || s == "run" || s == "ensemble";
}

bool known_key(const std::string& section, const std::string& key) {
  for (const auto& k : kKeys) {
    if (k.section == section && k.key == key) return true;
  }
  return false;
}

class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::vector<std::string>& errors)
      : sections_(sections), errors_(errors) {}

  bool has(const std::string& sec, const std::string& key) const {
    auto it = sections_.find(sec);
    return it != sections_.end() && it->second.count(key) != 0;
  }

  template <class T, class Fn>
  std::optional<T> get(const std::string& sec, const std::string& key, Fn&& parse) {
    auto it = sections_.find(sec);
    if (it == sections_.end()) return std::nullopt;
    auto kt = it->second.find(key);
    if (kt == it->second.end()) return std::nullopt;
    try {
      return parse(kt->second.value);
    } catch (const std::exception& ex) {
      errors_.push_back("line " + std::to_string(kt->second.line) + ": " + sec + "." + key + ": " +
                        ex.what());
      return std::nullopt;
    }
  }

  std::optional<double> quantity(const std::string& sec, const std::string& key, Dim d) {
    return get<double>(sec, key, [d](const std::string& v) { return units::parse(v, d); });
  }
  std::optional<std::vector<double>> list(const std::string& sec, const std::string& key, Dim d) {
    return get<std::vector<double>>(sec, key,
                                    [d](const std::string& v) { return units::parse_list(v, d); });
  }
  std::optional<unsigned long long> count(const std::string& sec, const std::string& key) {
    return get<unsigned long long>(sec, key,
                                   [](const std::string& v) { return units::parse_count(v); });
  }
  std::optional<bool> flag(const std::string& sec, const std::string& key) {
    return get<bool>(sec, key, [](const std::string& v) { return units::parse_bool(v); });
  }
  template <class E>
  std::optional<E> choice(const std::string& sec, const std::string& key,
                          const std::vector<std::pair<std::string, E>>& options) {
    return get<E>(sec, key, [&](const std::string& v) {
      std::string names;
      for (const auto& [n, e] : options) {
        if (v == n) return e;
        names += (names.empty() ? "" : ", ") + n;
      }
      throw std::invalid_argument("'" + v + "' is not one of " + names);
    });
  }

 private:
  std::map<std::string, Section>& sections_;
  std::vector<std::string>& errors_;
};

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void check_axis(const std::string& name, double lo, double hi, std::size_t n,
                std::vector<std::string>& errors) {
  if (n == 1) {
    if (lo != hi) errors.push_back("run: " + name + " line scan (n = 1) needs min == max");
  } else if (n < 16) {
    errors.push_back("run: " + name + " resolution must be at least 16 (or 1 for a line scan)");
  } else if (!(hi > lo)) {
    errors.push_back("run: " + name + " range needs max > min");
  }
}

}  // namespace

Kinematics RunConfig::kinematics() const { return kinematics_from_beta(beam.beta); }

LaserField RunConfig::laser(std::size_t i) const {
  const auto kin = kinematics();
  const double lam = beta_lambdas.at(i) / beam.beta;
  const double omega = 2.0 * constants::pi * constants::c / lam;
  const double field = E0 ? *E0 : field_for_upsilon(upsilon.value_or(0.0), L, omega);
  return make_laser(lam, field, L, beam.phi0, kin, theta_bar);
}

GridSpec RunConfig::grid(std::size_t i) const {
  auto g = default_grid(beam, kinematics(), beta_lambdas.at(i));
  if (N) g.N = *N;
  if (z_span) g.z_span = *z_span;
  return g;
}

Scenario RunConfig::scenario(std::size_t i) const {
  Scenario sc;
  sc.beam = beam;
  sc.laser = laser(i);
  sc.grid = grid(i);
  sc.dt = dt ? *dt : default_dt(sc.laser);
  sc.snapshots = snapshots;
  return sc;
}

EnsembleParams RunConfig::ensemble() const {
  EnsembleParams e;
  e.sigma_E_part = sigma_E_part;
  e.sigma_t_jitter = sigma_t_jitter;
  e.n_draws = n_draws;
  e.uniform_phase = phase_mode == PhaseMode::Uniform;
  e.analytic_phase = phase_mode == PhaseMode::Analytic;
  e.seed = seed;
  return e;
}

SweepSpec RunConfig::sweep() const {
  SweepSpec s;
  s.beam = beam;
  s.upsilon = upsilon.value_or(0.0);
  s.L = L;
  s.beta_lambdas = beta_lambdas;
  if (N || z_span) {
    GridSpec g = grid(0);
    s.grid = g;
  }
  return s;
}

std::string RunConfig::to_ini() const {
  using units::format;
  std::ostringstream o;
  auto q = [&](const char* key, double v, const char* unit) {
    o << key << " = " << format(v) << unit << '\n';
  };
  auto lst = [&](const char* key, const std::vector<double>& v, const char* unit) {
    o << key << " = ";
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << format(v[i]) << unit;
    o << '\n';
  };
  o << "[beam]\n";
  q("beta", beam.beta, "");
  q("sigma_z0", beam.sigma_z0, "m");
  q("L_D", beam.L_D, "m");
  q("phi0", beam.phi0, "rad");
  o << "[laser]\n";
  lst("beta_lambda", beta_lambdas, "m");
  if (E0) q("E0", *E0, "V/m");
  if (upsilon) q("upsilon", *upsilon, "");
  q("L", L, "m");
  q("theta_bar", theta_bar, "rad");
  o << "[grid]\n";
  if (N) o << "N = " << *N << '\n';
  if (z_span) q("z_span", *z_span, "m");
  o << "[run]\n";
  if (dt) q("dt", *dt, "s");
  if (!snapshots.empty()) lst("snapshots", snapshots, "s");
  o << "spectrum_axis = " << (spectrum_axis == SpectrumAxis::Energy ? "E" : "p") << '\n';
  o << "wigner = " << (write_wigner ? "true" : "false") << '\n';
  o << "wavefunction = " << (write_wavefunction ? "true" : "false") << '\n';
  if (wigner_z_stride) o << "wigner_z_stride = " << *wigner_z_stride << '\n';
  if (wigner_p_stride) o << "wigner_p_stride = " << *wigner_p_stride << '\n';
  if (wigner_z_min) q("wigner_z_min", *wigner_z_min, "m");
  if (wigner_z_max) q("wigner_z_max", *wigner_z_max, "m");
  if (wigner_E_min) q("wigner_E_min", *wigner_E_min, "J");
  if (wigner_E_max) q("wigner_E_max", *wigner_E_max, "J");
  o << "wigner_norm = " << (wigner_norm == WignerNorm::HbarHalf ? "hbar_half" : "unit") << '\n';
  q("diagram_sigma_min", diagram.sigma_min, "m");
  q("diagram_sigma_max", diagram.sigma_max, "m");
  q("diagram_L_D_min", diagram.L_D_min, "m");
  q("diagram_L_D_max", diagram.L_D_max, "m");
  o << "diagram_n_sigma = " << diagram.n_sigma << '\n';
  o << "diagram_n_LD = " << diagram.n_LD << '\n';
  o << "[ensemble]\n";
  q("sigma_E_part", sigma_E_part, "J");
  q("sigma_t_jitter", sigma_t_jitter, "s");
  o << "n_draws = " << n_draws << '\n';
  o << "phase_mode = "
    << (phase_mode == PhaseMode::Uniform    ? "uniform"
        : phase_mode == PhaseMode::Analytic ? "analytic"
                                            : "monte_carlo")
    << '\n';
  o << "seed = " << seed << '\n';
  return o.str();
}

RunConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  std::map<std::string, Section> sections;

  std::istringstream in(text);
  std::string raw;
  std::string current;
  bool skipping = false;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(at + "malformed section header '" + line + "'");
        skipping = true;
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      skipping = !known_section(current);
      if (skipping) errors.push_back(at + "unknown section [" + current + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(at + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (skipping) continue;
    if (current.empty()) {
      errors.push_back(at + "key '" + key + "' appears before any section");
      continue;
    }
    if (!known_key(current, key)) {
      errors.push_back(at + "unknown key '" + key + "' in [" + current + "]");
      continue;
    }
    auto& sec = sections[current];
    if (sec.count(key)) {
      errors.push_back(at + current + "." + key + " is set twice (first on line " +
                       std::to_string(sec[key].line) + ")");
      continue;
    }
    if (value.empty()) {
      errors.push_back(at + current + "." + key + " has an empty value");
      continue;
    }
    sec[key] = Entry{value, line_no};
  }

  Reader r(sections, errors);
  RunConfig cfg;

  // [beam]
  const auto beta = r.quantity("beam", "beta", Dim::Dimensionless);
  if (!r.has("beam", "beta")) errors.push_back("beam.beta is required");
  bool beta_ok = false;
  if (beta) {
    if (!(*beta > 0.0 && *beta < 1.0)) {
      errors.push_back("beam.beta = " + units::format(*beta) +
                       " lies outside the open interval (0, 1)");
    } else {
      cfg.beam.beta = *beta;
      beta_ok = true;
    }
  }
  const auto sz = r.quantity("beam", "sigma_z0", Dim::Length);
  const auto st = r.quantity("beam", "sigma_t0", Dim::Time);
  const bool has_sz = r.has("beam", "sigma_z0"), has_st = r.has("beam", "sigma_t0");
  bool sigma_ok = false;
  if (has_sz && has_st) {
    errors.push_back("beam: sigma_z0 and sigma_t0 are mutually exclusive (give exactly one)");
  } else if (!has_sz && !has_st) {
    errors.push_back("beam: one of sigma_z0 or sigma_t0 is required");
  } else if (sz || (st && beta_ok)) {
    const double v = sz ? *sz : *st * cfg.beam.beta * constants::c;
    if (!(v > 0.0)) {
      errors.push_back("beam: waist size must be positive");
    } else {
      cfg.beam.sigma_z0 = v;
      sigma_ok = true;
    }
  }
  if (auto v = r.quantity("beam", "L_D", Dim::Length)) cfg.beam.L_D = *v;
  if (auto v = r.quantity("beam", "phi0", Dim::Angle)) cfg.beam.phi0 = *v;

  // [laser]
  const bool has_lam = r.has("laser", "lambda"), has_bl = r.has("laser", "beta_lambda");
  bool lambda_ok = false;
  if (has_lam && has_bl) {
    errors.push_back("laser: lambda and beta_lambda are mutually exclusive (give exactly one)");
  } else if (!has_lam && !has_bl) {
    errors.push_back("laser: one of lambda or beta_lambda is required");
  } else {
    auto vals = r.list("laser", has_lam ? "lambda" : "beta_lambda", Dim::Length);
    if (vals) {
      bool positive = true;
      for (double v : *vals) positive = positive && v > 0.0;
      if (!positive) {
        errors.push_back(std::string("laser.") + (has_lam ? "lambda" : "beta_lambda") +
                         " values must be positive");
      } else if (has_lam && !beta_ok) {
        // beta error already reported
      } else {
        for (double v : *vals) cfg.beta_lambdas.push_back(has_lam ? v * cfg.beam.beta : v);
        lambda_ok = true;
      }
    }
  }
  const bool has_E0 = r.has("laser", "E0"), has_ups = r.has("laser", "upsilon");
  if (has_E0 && has_ups) {
    errors.push_back("laser: E0 and upsilon conflict (give exactly one)");
  } else if (!has_E0 && !has_ups) {
    errors.push_back("laser: one of E0 or upsilon is required");
  } else if (has_E0) {
    if (auto v = r.quantity("laser", "E0", Dim::Field)) {
      if (*v < 0.0) errors.push_back("laser.E0 must be non-negative");
      else cfg.E0 = *v;
    }
  } else if (auto v = r.quantity("laser", "upsilon", Dim::Dimensionless)) {
    if (*v < 0.0) errors.push_back("laser.upsilon must be non-negative");
    else cfg.upsilon = *v;
  }
  if (auto v = r.quantity("laser", "L", Dim::Length)) {
    if (!(*v > 0.0)) errors.push_back("laser.L must be positive");
    else cfg.L = *v;
  }
  if (auto v = r.quantity("laser", "theta_bar", Dim::Angle)) cfg.theta_bar = *v;

  // [grid]
  if (auto v = r.count("grid", "N")) {
    if (!is_power_of_two(*v)) errors.push_back("grid.N must be a power of two >= 2");
    else cfg.N = static_cast<std::size_t>(*v);
  }
  if (auto v = r.quantity("grid", "z_span", Dim::Length)) {
    if (!(*v > 0.0)) errors.push_back("grid.z_span must be positive");
    else cfg.z_span = *v;
  }

  // [run]
  if (auto v = r.quantity("run", "dt", Dim::Time)) {
    if (!(*v > 0.0)) errors.push_back("run.dt must be positive");
    else cfg.dt = *v;
  }
  if (auto v = r.list("run", "snapshots", Dim::Time)) cfg.snapshots = *v;
  if (auto v = r.choice<SpectrumAxis>("run", "spectrum_axis",
                                      {{"p", SpectrumAxis::Momentum}, {"E", SpectrumAxis::Energy}})) {
    cfg.spectrum_axis = *v;
  }
  if (auto v = r.flag("run", "wigner")) cfg.write_wigner = *v;
  if (auto v = r.flag("run", "wavefunction")) cfg.write_wavefunction = *v;
  for (auto [key, slot] : {std::pair{"wigner_z_stride", &cfg.wigner_z_stride},
                           std::pair{"wigner_p_stride", &cfg.wigner_p_stride}}) {
    if (auto v = r.count("run", key)) {
      if (*v == 0) errors.push_back(std::string("run.") + key + " must be at least 1");
      else *slot = static_cast<std::size_t>(*v);
    }
  }
  cfg.wigner_z_min = r.quantity("run", "wigner_z_min", Dim::Length);
  cfg.wigner_z_max = r.quantity("run", "wigner_z_max", Dim::Length);
  cfg.wigner_E_min = r.quantity("run", "wigner_E_min", Dim::Energy);
  cfg.wigner_E_max = r.quantity("run", "wigner_E_max", Dim::Energy);
  if (cfg.wigner_z_min && cfg.wigner_z_max && !(*cfg.wigner_z_max > *cfg.wigner_z_min)) {
    errors.push_back("run: wigner_z_max must exceed wigner_z_min");
  }
  if (cfg.wigner_E_min && cfg.wigner_E_max && !(*cfg.wigner_E_max > *cfg.wigner_E_min)) {
    errors.push_back("run: wigner_E_max must exceed wigner_E_min");
  }
  if (auto v = r.choice<WignerNorm>("run", "wigner_norm",
                                    {{"unit", WignerNorm::Unit}, {"hbar_half", WignerNorm::HbarHalf}})) {
    cfg.wigner_norm = *v;
  }
  if (auto v = r.quantity("run", "diagram_sigma_min", Dim::Length)) cfg.diagram.sigma_min = *v;
  if (auto v = r.quantity("run", "diagram_sigma_max", Dim::Length)) cfg.diagram.sigma_max = *v;
  if (auto v = r.quantity("run", "diagram_L_D_min", Dim::Length)) cfg.diagram.L_D_min = *v;
  if (auto v = r.quantity("run", "diagram_L_D_max", Dim::Length)) cfg.diagram.L_D_max = *v;
  if (auto v = r.count("run", "diagram_n_sigma")) cfg.diagram.n_sigma = static_cast<std::size_t>(*v);
  if (auto v = r.count("run", "diagram_n_LD")) cfg.diagram.n_LD = static_cast<std::size_t>(*v);
  if (!(cfg.diagram.sigma_min > 0.0)) errors.push_back("run.diagram_sigma_min must be positive");
  check_axis("diagram sigma", cfg.diagram.sigma_min, cfg.diagram.sigma_max, cfg.diagram.n_sigma,
             errors);
  check_axis("diagram L_D", cfg.diagram.L_D_min, cfg.diagram.L_D_max, cfg.diagram.n_LD, errors);

  // [ensemble]
  if (auto v = r.quantity("ensemble", "sigma_E_part", Dim::Energy)) {
    if (*v < 0.0) errors.push_back("ensemble.sigma_E_part must be non-negative");
    else cfg.sigma_E_part = *v;
  }
  if (auto v = r.quantity("ensemble", "sigma_t_jitter", Dim::Time)) {
    if (*v < 0.0) errors.push_back("ensemble.sigma_t_jitter must be non-negative");
    else cfg.sigma_t_jitter = *v;
  }
  if (auto v = r.count("ensemble", "n_draws")) {
    if (*v == 0) errors.push_back("ensemble.n_draws must be at least 1");
    else cfg.n_draws = static_cast<std::size_t>(*v);
  }
  if (auto v = r.choice<PhaseMode>("ensemble", "phase_mode",
                                   {{"monte_carlo", PhaseMode::MonteCarlo},
                                    {"uniform", PhaseMode::Uniform},
                                    {"analytic", PhaseMode::Analytic}})) {
    cfg.phase_mode = *v;
  }
  if (auto v = r.count("ensemble", "seed")) cfg.seed = *v;

  // Cross-module invariants, once the basics are sound.
  if (beta_ok && sigma_ok && lambda_ok && (cfg.E0 || cfg.upsilon)) {
    const auto kin = cfg.kinematics();
    for (std::size_t i = 0; i < cfg.beta_lambdas.size(); ++i) {
      const std::string tag = cfg.beta_lambdas.size() > 1
                                  ? "beta_lambda " + units::format(cfg.beta_lambdas[i]) + " m: "
                                  : std::string();
      try {
        const auto sc = cfg.scenario(i);
        auto probe = sc;
        probe.snapshots.clear();
        try {
          probe.validate(kin);
        } catch (const ConfigurationError& ex) {
          errors.push_back(tag + ex.what());
        }
        const double dz = sc.grid.dz();
        if (dz > cfg.beam.sigma_z0 / 8.0) {
          errors.push_back(tag + "grid: dz = " + units::format(dz) +
                           " m exceeds sigma_z0/8; the waist is not resolved");
        }
        if (sc.grid.z_span < 16.0 * cfg.beam.sigma_z0) {
          errors.push_back(tag + "grid: z_span is below 16 sigma_z0");
        }
        const double t_int = sc.laser.interaction_time(kin);
        for (double t : cfg.snapshots) {
          if (t < 0.0 || t > t_int) {
            errors.push_back(tag + "run.snapshots: " + units::format(t) +
                             " s lies outside the interaction window [0, " +
                             units::format(t_int) + "] s");
          }
        }
      } catch (const std::exception& ex) {
        errors.push_back(tag + ex.what());
      }
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qew
