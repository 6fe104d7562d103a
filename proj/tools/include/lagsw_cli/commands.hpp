#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lagsw/io.hpp"

namespace lagsw::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 2,  // bad config, bad input data or failed hypotheses
  kSolverFailure = 3,
  kVerificationFailure = 4,
};

/// Command-line values that override the config file.
struct Overrides {
  bool force = false;
  std::optional<int> workers;
  std::optional<std::filesystem::path> out;
  // "K" records every K steps; a value with '.' or an exponent is a time interval.
  std::optional<std::string> cadence;
  std::optional<std::vector<double>> snapshot_times;
};

/// Applies overrides on top of a parsed config. Throws io::ConfigError.
void apply(const Overrides& overrides, io::RunConfig& config);

/// Single simulation. Writes diagnostics.csv, snapshot_<k>.txt per requested
/// time and summary.json into config.output; outputs written before a solver
/// failure are kept.
int cmd_run(const io::RunConfig& config, bool force, std::ostream& log);

/// Property suite; writes verify.json and exits kVerificationFailure naming
/// every failed check.
int cmd_verify(const io::RunConfig& config, std::ostream& log);

/// Manufactured-solution refinement plus scheme agreement; writes converge.json.
int cmd_converge(const io::RunConfig& config, std::ostream& log);

/// Cartesian product over the sweep grid, one run directory per cell and
/// rollup.csv. Failed cells are recorded and the sweep continues; the exit
/// code is the worst sub-run code.
int cmd_sweep(const io::RunConfig& config, bool force, std::ostream& log);

/// Names of the verify checks, in execution order.
const std::vector<std::string>& verify_check_names();

/// Full command-line entry point (argv[0] included).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lagsw::cli
