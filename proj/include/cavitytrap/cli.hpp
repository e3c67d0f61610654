#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cavitytrap/config.hpp"

namespace cavitytrap {

/// Subcommands: wells, coefficients, dressed, saturation, simulate.
bool is_subcommand(const std::string& name);

/// Runs one subcommand, writing its CSV files and manifest.json into
/// config.out. The manifest is written even when the run fails; errors are
/// rethrown after that.
void dispatch(const std::string& subcommand, const RunConfig& config, std::ostream& log);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Command-line entry point; returns the process exit status.
int run_cli(int argc, char** argv);

}  // namespace cavitytrap
