#pragma once
// runner.hpp — subcommand implementations behind the CLI.

#include <iosfwd>
#include <string>

#include "becsense/config.hpp"

namespace becsense::runner {

/// Executes one subcommand; returns a process exit code (0 on success).
/// name is one of: cpw-info, field-map, mode-volume, bmax, dfunc-sweep,
/// atom-rate, reproduce-paper, sweep.  Output files land in
/// cfg.output.directory; human-readable summaries go to `out`.
int run_subcommand(const std::string& name, const config::RunConfig& cfg, int threads,
                   std::ostream& out);

}  // namespace becsense::runner
