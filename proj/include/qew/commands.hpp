#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qew/config.hpp"
#include "qew/text_io.hpp"

namespace qew {

struct CommandOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides [ensemble] seed
};

/// Exit codes shared by every command.
enum ExitCode : int { kOk = 0, kRunFailure = 1, kConfigFailure = 2 };

/// Pure analytics for the first beta lambda of the config.
io::KeyValues predict_summary(const RunConfig& cfg);

/// Dispatches predict | simulate | wigner | phase-diagram | sweep | ensemble.
/// Writes output files under opt.out_dir and the summary block to `out`;
/// diagnostics go to `err`.
int run_command(const std::string& command, RunConfig cfg, const CommandOptions& opt,
                std::ostream& out, std::ostream& err);

}  // namespace qew
