#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lagsw/functionals.hpp"
#include "lagsw/initcond.hpp"
#include "lagsw/params.hpp"
#include "lagsw/state.hpp"
#include "lagsw/verify.hpp"

namespace lagsw::io {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data file (CSV, snapshot, tabulated profile).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Flat `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Duplicate keys and lines without `=` throw ConfigError with the line number.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

struct SweepGrid {
  std::vector<int> dimensions;
  std::vector<double> gammas;
  std::vector<int> cells;
  std::map<std::string, std::vector<double>, std::less<>> preset_args;

  bool empty() const {
    return dimensions.empty() && gammas.empty() && cells.empty() && preset_args.empty();
  }
};

struct RunConfig {
  SimParams params;

  std::string preset = "gaussian_bump";
  init::PresetArgs preset_args;
  // Two-column (r, value) files; rho is required when any is set.
  std::filesystem::path profile_rho, profile_u, profile_s;
  // Earlier snapshot reused as tabulated initial data.
  std::filesystem::path profile_snapshot;

  std::filesystem::path output = "lagsw_out";
  int cadence_steps = 1;
  double cadence_time = 0.0;
  std::vector<double> snapshot_times;

  // verify subcommand
  std::vector<std::string> checks;  // empty: all
  std::vector<int> verify_levels = {64, 128, 256};
  double verify_t_end = 0.5;

  // converge subcommand
  std::string mms_solution = "origin_regular";  // origin_regular, trigonometric or quiescent
  verify::MmsOptions mms;
  std::vector<int> agreement_levels = {64, 128, 256};
  double agreement_t_end = 0.5;

  SweepGrid sweep;
  int workers = 1;

  /// Checks cross-field constraints on top of SimParams::validate().
  void validate() const;
};

/// Every key understood by from_key_values, with a one-line description.
const std::vector<std::pair<std::string_view, std::string_view>>& config_keys();

RunConfig from_key_values(const KeyValues& kv);
RunConfig load_config(const std::filesystem::path& path);

/// Preset, tabulated files or snapshot, as selected by the config.
init::PhysicalProfile make_profile(const RunConfig& config);

// ---------------------------------------------------------------------------
// Diagnostics CSV

inline constexpr std::array<std::string_view, 20> kCsvColumns = {
    "tau",     "mass",         "total_volume", "E_basic",  "D_basic",
    "E_bd",    "D_bd",         "S_bd",         "rho_min",  "rho_max",
    "s_min",   "s_max",        "sup_u",        "sup_w",    "l4_u",
    "l4_w",    "l2_grad_rho_weighted", "weighted_origin_norm", "energy_residual", "bd_residual"};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const DiagnosticsRecord& record);
/// Parses a file written by the two functions above. Throws FormatError on a
/// header mismatch or a short row.
std::vector<DiagnosticsRecord> read_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Snapshots

inline constexpr int kSnapshotVersion = 1;

struct Snapshot {
  int version = kSnapshotVersion;
  int dimension = 2;
  double gamma = 1.4;
  double domain_radius = 1.0;
  State state;
  std::vector<double> w;
  std::vector<double> pressure;
};

/// Header, then M+1 node rows (y r u w) and M cell rows (y_center rho s P),
/// all at 17 significant digits so reading back is exact.
void write_snapshot(std::ostream& out, const State& state, const SimParams& params);
void write_snapshot(const std::filesystem::path& path, const State& state, const SimParams& params);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Tabulated profile in physical radius: cell values at the mass midpoints of
/// their shells, velocity at node radii.
init::PhysicalProfile profile_from_snapshot(const Snapshot& snapshot);

/// Whitespace- or comma-separated (r, value) pairs, `#` comments allowed.
/// Radii must be strictly increasing.
std::pair<std::vector<double>, std::vector<double>> read_two_columns(std::istream& in);
std::pair<std::vector<double>, std::vector<double>> read_two_columns(
    const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// JSON reports

std::string to_json(const SimParams& params);
std::string to_json(const init::HypothesisReport& report);
std::string to_json(const DiagnosticsRecord& record);
std::string to_json(const verify::ConvergenceReport& report);
std::string to_json(const verify::AgreementReport& report);
std::string to_json(const verify::KappaReport& report);
std::string to_json(const verify::LargeTimeReport& report);

}  // namespace lagsw::io
