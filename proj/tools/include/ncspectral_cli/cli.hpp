#pragma once

// Subcommand runner and entry point of the ncspectral tool.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncspectral_cli/config.hpp"

namespace ncspectral::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitPrecondition = 2,
  kExitCheckFailed = 3,
  kExitUnknownCommand = 64,
  kExitBadConfig = 65,
};

/// One CSV table plus the results block of summary.json.
struct Artifacts {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json results;
  bool check_failed = false;
};

inline const std::vector<std::string> kCommands = {
    "zeta eval",    "zeta residue",          "dio classify", "dio construct",     "action fit",
    "action heat", "action constant-term", "action correction", "op check"};

std::string version();
/// %.17g, so identical runs give identical bytes.
std::string format_double(double x);
std::string to_csv(const Artifacts& a);

/// Runs one subcommand ("zeta eval", ...). Throws ncspectral::Error.
Artifacts run_command(const std::string& command, const RunConfig& cfg);
/// Writes results.csv and summary.json into cfg.output.
void write_artifacts(const std::string& command, const RunConfig& cfg, const Artifacts& a);

/// Full command line: parses flags, runs, writes artifacts, returns the exit code.
int run_main(int argc, const char* const* argv);

}  // namespace ncspectral::cli
