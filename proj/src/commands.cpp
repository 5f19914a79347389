#include "qew/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/perturbation.hpp"
#include "qew/units.hpp"

namespace qew {

namespace k = constants;
using units::format;

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string path_in(const CommandOptions& opt, const std::string& name) {
  return (std::filesystem::path(opt.out_dir) / name).string();
}

void require_single(const std::string& command, const RunConfig& cfg) {
  if (cfg.beta_lambdas.size() != 1) {
    throw ConfigError({command + " takes exactly one wavelength; lists are for sweep"});
  }
}

WignerOptions wigner_options(const RunConfig& cfg, const Wavefunction& psi, const Kinematics& kin) {
  const auto m = moments(psi);
  WignerOptions o;
  o.z_min = cfg.wigner_z_min ? *cfg.wigner_z_min : m.mean_z - 6.0 * m.sigma_z;
  o.z_max = cfg.wigner_z_max ? *cfg.wigner_z_max : m.mean_z + 6.0 * m.sigma_z;
  const double dp_mean = m.mean_p - psi.p0;
  o.p_min = cfg.wigner_E_min ? *cfg.wigner_E_min / kin.v0 : dp_mean - 6.0 * m.sigma_p;
  o.p_max = cfg.wigner_E_max ? *cfg.wigner_E_max / kin.v0 : dp_mean + 6.0 * m.sigma_p;
  const auto fit = [](double span, double step) {
    const double cells = std::max(1.0, span / step);
    return static_cast<std::size_t>(std::max(1.0, std::ceil(cells / 512.0)));
  };
  o.z_stride = cfg.wigner_z_stride ? *cfg.wigner_z_stride : fit(*o.z_max - *o.z_min, psi.grid.dz());
  o.p_stride = cfg.wigner_p_stride ? *cfg.wigner_p_stride : fit(*o.p_max - *o.p_min, psi.grid.dp());
  return o;
}

struct WignerStats {
  double min = 0.0, max = 0.0;
};

WignerStats stats(const WignerGrid& w) {
  WignerStats s;
  if (!w.values.empty()) {
    const auto [lo, hi] = std::minmax_element(w.values.begin(), w.values.end());
    s.min = *lo;
    s.max = *hi;
  }
  return s;
}

void append_regime(io::KeyValues& kv, const RegimeReport& r) {
  kv.emplace_back("regime", to_string(r.label));
  kv.emplace_back("Gamma0", format(r.Gamma0));
  kv.emplace_back("Gamma", format(r.Gamma));
  kv.emplace_back("damping", format(r.damping));
  kv.emplace_back("sigma_z_entrance_m", format(r.sigma_z_entrance));
  kv.emplace_back("predicted_spectral_period_kg_m_s",
                  r.predicted_spectral_period ? format(*r.predicted_spectral_period) : "none");
}

void emit(std::ostream& out, const io::KeyValues& kv) {
  for (const auto& [key, v] : kv) out << key << " = " << v << '\n';
}

int cmd_predict(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  require_single("predict", cfg);
  const auto kv = predict_summary(cfg);
  io::write_file(path_in(opt, "predict.txt"), io::key_values(io::header("predict", cfg), kv));
  emit(out, kv);
  return kOk;
}

io::KeyValues simulation_summary(const RunConfig& cfg, const Scenario& sc, const Kinematics& kin,
                                 const Wavefunction& entrance, const InteractionResult& res,
                                 const Spectrum& spec) {
  io::KeyValues kv;
  const auto report = classify(sc.beam, sc.laser.lambda);
  append_regime(kv, report);
  const auto th = first_order_theory(sc.beam, sc.laser, kin);
  const double scale = k::e * sc.laser.E0 * sc.laser.L / kin.v0;
  const auto spec0 = momentum_spectrum(entrance);
  kv.emplace_back("upsilon", format(th.upsilon));
  kv.emplace_back("E0_V_per_m", format(sc.laser.E0));
  kv.emplace_back("steps", std::to_string(res.steps));
  kv.emplace_back("dt_s", format(res.dt));
  kv.emplace_back("norm_error", format(std::abs(res.final_state.norm() - 1.0)));
  const double shift = mean_shift(spec, spec0);
  kv.emplace_back("mean_shift_kg_m_s", format(shift));
  kv.emplace_back("predicted_mean_shift_kg_m_s", format(th.dp_mean));
  kv.emplace_back("point_particle_shift_kg_m_s", format(th.dp_point));
  kv.emplace_back("shift_delta_over_eE0L_v0",
                  scale > 0.0 ? format((shift - th.dp_mean) / scale) : "none");
  kv.emplace_back("spectrum_sigma_p_kg_m_s", format(spec.stddev()));

  const double sigma_p0 = sc.beam.sigma_p0();
  if (th.sideband_spacing > 4.0 * sigma_p0) {
    const auto w = sideband_weights(spec, th.sideband_spacing, 3, sigma_p0);
    for (int n = -3; n <= 3; ++n) kv.emplace_back("sideband_weight_" + std::to_string(n), format(w.at(n)));
    kv.emplace_back("first_order_sideband_weight", format(th.upsilon * th.upsilon));
    const auto s = sideband_spacing_estimate(spec);
    kv.emplace_back("sideband_spacing_kg_m_s", s ? format(*s) : "none");
  } else {
    kv.emplace_back("sideband_weights", "unresolvable (spacing <= 4 sigma_p0)");
  }
  kv.emplace_back("predicted_sideband_spacing_kg_m_s", format(th.sideband_spacing));

  const auto f = fringe_spacing_estimate(spec);
  kv.emplace_back("fringes_detected", yes_no(f.detected));
  kv.emplace_back("fringe_period_kg_m_s", f.detected ? format(f.period) : "none");
  kv.emplace_back("fringe_confidence", format(f.confidence));
  kv.emplace_back("fringe_period_peak_to_peak_kg_m_s",
                  std::isfinite(f.period_peak_to_peak) ? format(f.period_peak_to_peak) : "none");
  kv.emplace_back("predicted_fringe_period_kg_m_s", format(th.delta_p_fringe));
  kv.emplace_back("fringe_period_ratio",
                  f.detected && th.delta_p_fringe > 0.0 ? format(f.period / th.delta_p_fringe) : "none");
  (void)cfg;
  return kv;
}

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
                 bool wigner_only) {
  const std::string name = wigner_only ? "wigner" : "simulate";
  require_single(name, cfg);
  const auto kin = cfg.kinematics();
  const auto sc = cfg.scenario();
  const auto head = io::header(name, cfg);
  const auto entrance = prepare_entrance(sc.beam, sc.grid, kin);
  const auto res = run_interaction(entrance, sc, kin);
  const auto spec = momentum_spectrum(res.final_state);
  auto kv = simulation_summary(cfg, sc, kin, entrance, res, spec);

  if (!wigner_only) {
    io::write_file(path_in(opt, "spectrum.txt"),
                   io::spectrum_table(head, spec, cfg.spectrum_axis, kin.v0));
    if (cfg.write_wavefunction) {
      io::write_file(path_in(opt, "wavefunction_entrance.txt"), io::wavefunction_table(head, entrance));
      io::write_file(path_in(opt, "wavefunction_final.txt"),
                     io::wavefunction_table(head, res.final_state));
    }
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
      io::write_file(path_in(opt, "snapshot_" + std::to_string(i) + ".txt"),
                     io::wavefunction_table(head, res.snapshots[i]));
    }
  }
  if (wigner_only || cfg.write_wigner) {
    const auto o = wigner_options(cfg, res.final_state, kin);
    const auto w = with_norm(wigner(res.final_state, o), cfg.wigner_norm);
    io::write_file(path_in(opt, "wigner.txt"), io::wigner_table(head, w));
    const auto s = stats(w);
    kv.emplace_back("wigner_N_z", std::to_string(w.nz));
    kv.emplace_back("wigner_N_p", std::to_string(w.np));
    kv.emplace_back("wigner_min", format(s.min));
    kv.emplace_back("wigner_max", format(s.max));
    kv.emplace_back("wigner_negative", yes_no(s.min < -1e-4 * s.max));
    if (wigner_only) {
      const auto we = with_norm(wigner(entrance, wigner_options(cfg, entrance, kin)), cfg.wigner_norm);
      io::write_file(path_in(opt, "wigner_entrance.txt"), io::wigner_table(head, we));
      const auto se = stats(we);
      kv.emplace_back("wigner_entrance_min", format(se.min));
      kv.emplace_back("wigner_entrance_max", format(se.max));
    }
  }
  io::write_file(path_in(opt, "summary.txt"), io::key_values(head, kv));
  emit(out, kv);
  return kOk;
}

int cmd_phase_diagram(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  require_single("phase-diagram", cfg);
  const auto d = phase_diagram(cfg.diagram, cfg.beam.beta, cfg.lambda());
  const auto head = io::header("phase-diagram", cfg);
  io::write_file(path_in(opt, "phase_diagram_damping.txt"), io::diagram_grid(head, d, "damping"));
  io::write_file(path_in(opt, "phase_diagram_gamma.txt"), io::diagram_grid(head, d, "gamma"));
  io::write_file(path_in(opt, "phase_diagram_labels.txt"), io::diagram_grid(head, d, "label"));
  io::write_file(path_in(opt, "contour_gamma.txt"), io::contour_table(head, d.gamma_contour));
  io::write_file(path_in(opt, "contour_gamma0.txt"), io::contour_table(head, d.gamma0_contour));

  std::size_t counts[3] = {0, 0, 0};
  for (auto l : d.labels) ++counts[static_cast<int>(l)];
  double max_sigma = 0.0;
  for (const auto& pl : d.gamma_contour) {
    for (double s : pl.sigma_z0) max_sigma = std::max(max_sigma, s);
  }
  io::KeyValues kv{
      {"n_sigma", std::to_string(d.n_sigma())},
      {"n_LD", std::to_string(d.n_LD())},
      {"cells_acceleration", std::to_string(counts[0])},
      {"cells_pinem", std::to_string(counts[1])},
      {"cells_apinem", std::to_string(counts[2])},
      {"gamma_contour_polylines", std::to_string(d.gamma_contour.size())},
      {"gamma0_contour_polylines", std::to_string(d.gamma0_contour.size())},
      {"gamma_contour_max_sigma_z0_m", d.gamma_contour.empty() ? "none" : format(max_sigma)},
      {"threshold_sigma_z_m", format(cfg.beta_lambda() / (std::sqrt(2.0) * k::pi))},
  };
  io::write_file(path_in(opt, "summary.txt"), io::key_values(head, kv));
  emit(out, kv);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  const auto r = sweep_fringe_vs_wavelength(cfg.sweep());
  const auto head = io::header("sweep", cfg);
  io::write_file(path_in(opt, "sweep.txt"), io::sweep_table(head, r));
  io::KeyValues kv{
      {"points", std::to_string(r.points.size())},
      {"failed_points",
       std::to_string(std::count_if(r.points.begin(), r.points.end(), [](const SweepPoint& p) { return !p.ok; }))},
      {"apinem_points", std::to_string(r.n_apinem)},
      {"apinem_fit_slope_kg_s^-1", r.n_apinem ? format(r.fit_slope) : "none"},
      {"apinem_predicted_slope_kg_s^-1", format(r.predicted_slope)},
      {"apinem_slope_ratio", r.n_apinem ? format(r.fit_slope / r.predicted_slope) : "none"},
      {"pinem_points", std::to_string(r.n_pinem)},
      {"pinem_fit_constant_J_s", r.n_pinem ? format(r.fit_inverse_constant) : "none"},
      {"pinem_predicted_constant_J_s", format(r.predicted_inverse_constant)},
      {"pinem_constant_ratio",
       r.n_pinem ? format(r.fit_inverse_constant / r.predicted_inverse_constant) : "none"},
  };
  io::write_file(path_in(opt, "summary.txt"), io::key_values(head, kv));
  emit(out, kv);
  for (const auto& p : r.points) {
    if (!p.ok) err << "sweep point beta_lambda=" << format(p.beta_lambda) << " m failed: " << p.error << '\n';
  }
  return r.any_failed() ? kRunFailure : kOk;
}

int cmd_ensemble(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  require_single("ensemble", cfg);
  const auto kin = cfg.kinematics();
  const auto sc = cfg.scenario();
  const auto ens = cfg.ensemble();
  const auto spec = ensemble_average(sc, kin, ens);
  const auto head = io::header("ensemble", cfg);
  io::write_file(path_in(opt, "ensemble_spectrum.txt"),
                 io::spectrum_table(head, spec, cfg.spectrum_axis, kin.v0));

  const auto entrance_spec = momentum_spectrum(prepare_entrance(sc.beam, sc.grid, kin));
  const auto th = first_order_theory(sc.beam, sc.laser, kin);
  const double sigma_E0 = sc.beam.sigma_E0(kin);
  const double scale = k::e * sc.laser.E0 * sc.laser.L / kin.v0;
  const double shift = mean_shift(spec, entrance_spec);
  io::KeyValues kv;
  append_regime(kv, classify(sc.beam, sc.laser.lambda));
  kv.emplace_back("draws", ens.analytic_phase && ens.sigma_t_jitter > 0.0 ? "analytic"
                                                                          : std::to_string(ens.n_draws));
  kv.emplace_back("mean_shift_kg_m_s", format(shift));
  kv.emplace_back("mean_shift_over_eE0L_v0", scale > 0.0 ? format(shift / scale) : "none");
  kv.emplace_back("measured_Delta_E_J", format(2.0 * kin.v0 * spec.stddev()));
  kv.emplace_back("zero_field_Delta_E_J",
                  format(2.0 * std::sqrt(sigma_E0 * sigma_E0 + ens.sigma_E_part * ens.sigma_E_part)));
  kv.emplace_back("fringe_visibility_at_predicted_period",
                  th.delta_p_fringe > 0.0 ? format(visibility(spec, th.delta_p_fringe)) : "none");
  const auto f = fringe_spacing_estimate(spec);
  kv.emplace_back("fringes_detected", yes_no(f.detected));
  kv.emplace_back("fringe_period_kg_m_s", f.detected ? format(f.period) : "none");
  io::write_file(path_in(opt, "summary.txt"), io::key_values(head, kv));
  emit(out, kv);
  return kOk;
}

}  // namespace

io::KeyValues predict_summary(const RunConfig& cfg) {
  const auto kin = cfg.kinematics();
  const auto laser = cfg.laser();
  const auto ps = photon_scale(laser.lambda, kin);
  const auto th = first_order_theory(cfg.beam, laser, kin);
  const auto report = classify(cfg.beam, laser.lambda);
  const double sigma_E0 = cfg.beam.sigma_E0(kin);
  const double sigma_t = report.sigma_z_entrance / kin.v0;

  io::KeyValues kv;
  append_regime(kv, report);
  kv.emplace_back("beta", format(kin.beta));
  kv.emplace_back("gamma", format(kin.gamma));
  kv.emplace_back("m_star_kg", format(kin.m_star));
  kv.emplace_back("lambda_m", format(laser.lambda));
  kv.emplace_back("beta_lambda_m", format(ps.beta_lambda));
  kv.emplace_back("hbar_omega_J", format(ps.hbar_omega));
  kv.emplace_back("recoil_kg_m_s", format(ps.recoil));
  kv.emplace_back("sigma_p0_kg_m_s", format(cfg.beam.sigma_p0()));
  kv.emplace_back("sigma_E0_J", format(sigma_E0));
  kv.emplace_back("large_recoil", yes_no(2.0 * sigma_E0 < ps.hbar_omega));
  kv.emplace_back("long_wavepacket", yes_no(2.0 * sigma_t > ps.period));
  kv.emplace_back("upsilon", format(th.upsilon));
  kv.emplace_back("E0_V_per_m", format(laser.E0));
  kv.emplace_back("theta_bar_rad", format(th.theta_bar));
  kv.emplace_back("dp_point_kg_m_s", format(th.dp_point));
  kv.emplace_back("dp_mean_kg_m_s", format(th.dp_mean));
  kv.emplace_back("sideband_spacing_kg_m_s", format(th.sideband_spacing));
  kv.emplace_back("fringe_period_kg_m_s", format(th.delta_p_fringe));
  kv.emplace_back("fringe_period_far_kg_m_s", format(th.delta_p_fringe_far));
  kv.emplace_back("fringe_period_E_J", format(th.delta_E_fringe));
  return kv;
}

int run_command(const std::string& command, RunConfig cfg, const CommandOptions& opt,
                std::ostream& out, std::ostream& err) {
  if (opt.seed) cfg.seed = *opt.seed;
  try {
    std::filesystem::create_directories(opt.out_dir);
    if (command == "predict") return cmd_predict(cfg, opt, out);
    if (command == "simulate") return cmd_simulate(cfg, opt, out, false);
    if (command == "wigner") return cmd_simulate(cfg, opt, out, true);
    if (command == "phase-diagram") return cmd_phase_diagram(cfg, opt, out);
    if (command == "sweep") return cmd_sweep(cfg, opt, out, err);
    if (command == "ensemble") return cmd_ensemble(cfg, opt, out);
    err << "unknown command '" << command << "'\n";
    return kConfigFailure;
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) err << "config error: " << v << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << command << " failed: " << e.what() << '\n';
    return kRunFailure;
  }
}

}  // namespace qew
