#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "config.hpp"

namespace sdpp::cli {

enum class Command { Simulate, Ensemble, Classify, Convergence, Sweep };

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command c);

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitFault = 2 };

/// Comment block written at the top of every output file: command,
/// preset, canonical overrides, seed, dt and the assumed a1/a2 flag.
/// Output paths are left out so that identical runs produce identical bytes.
std::string metadata_header(Command command, const RunConfig& config);

/// Runs one subcommand. Artifacts go to `config.output` (stdout when
/// empty or "-"; sweeps use it as a file prefix, default "sweep").
/// Returns 0 on success and 2 on a runtime fault; hypothesis outcomes
/// never change the status.
int run_subcommand(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sdpp::cli
