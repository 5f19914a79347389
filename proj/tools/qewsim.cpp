#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qew/commands.hpp"
#include "qew/config.hpp"
#include "qew/errors.hpp"
#include "qew/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum electron wavepacket / near-field interaction simulator"};
  app.require_subcommand(1);

  std::string config_path;
  qew::CommandOptions opt;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"predict", "Closed-form first-order theory and regime classification"},
      {"simulate", "Split-step propagation; spectrum, summary and optional snapshots"},
      {"wigner", "Propagation plus Wigner grids of the entrance and final states"},
      {"phase-diagram", "Regime map over waist size and pre-drift length"},
      {"sweep", "Fringe / sideband period versus reduced wavelength"},
      {"ensemble", "Ensemble-averaged spectrum with energy and phase jitter"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "INI configuration file")->required();
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Random seed (overrides [ensemble] seed)");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  }
  CLI11_PARSE(app, argc, argv);

  qew::thread_count_setting() = threads;
  opt.seed = seed;
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    auto cfg = qew::load_config(config_path);
    return qew::run_command(command, std::move(cfg), opt, std::cout, std::cerr);
  } catch (const qew::ConfigError& e) {
    for (const auto& v : e.violations()) std::cerr << "config error: " << v << '\n';
    return qew::kConfigFailure;
  }
}
