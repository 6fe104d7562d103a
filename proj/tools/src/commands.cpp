#include "lagsw_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lagsw/model.hpp"
#include "lagsw/solver.hpp"
#include "lagsw/verify.hpp"

namespace lagsw::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kOrderContract = 0.8;
constexpr double kSpaceOrderContract = 1.8;
constexpr double kBdIncreaseTolerance = 1e-10;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw io::FormatError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

struct RunOutcome {
  int code = kOk;
  std::string status = "ok";
  std::string message;
  std::optional<DiagnosticsRecord> last;
};

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

RunOutcome simulate(const io::RunConfig& config, bool force, std::ostream& log) {
  RunOutcome outcome;
  const auto t_start = std::chrono::steady_clock::now();
  const SimParams& params = config.params;
  State state;
  try {
    config.validate();
    state = init::normalize_and_sample(io::make_profile(config), params);
  } catch (const std::exception& e) {
    log << "validation failure: " << e.what() << '\n';
    return {kValidationFailure, "validation_failure", e.what(), std::nullopt};
  }

  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) {
    log << "validation failure: cannot create '" << config.output.string() << "'\n";
    return {kValidationFailure, "validation_failure", "output directory not writable", std::nullopt};
  }

  json summary;
  summary["params"] = json::parse(io::to_json(params));
  summary["profile"] = config.profile_snapshot.empty() && config.profile_rho.empty()
                           ? config.preset
                           : std::string("tabulated");
  summary["preset_args"] = config.preset_args;
  const auto hypotheses = init::validate_hypotheses(state, params);
  summary["hypotheses"] = json::parse(io::to_json(hypotheses));
  summary["forced"] = force;

  if (!hypotheses.passed() && !force) {
    log << "validation failure:";
    for (const auto& f : hypotheses.failures) log << ' ' << f << ';';
    log << " (use --force to run anyway)\n";
    outcome = {kValidationFailure, "validation_failure", "hypotheses not satisfied", std::nullopt};
    summary["status"] = outcome.status;
    summary["exit_code"] = outcome.code;
    write_json(config.output / "summary.json", summary);
    return outcome;
  }

  const State initial = state;
  std::ofstream csv(config.output / "diagnostics.csv");
  if (!csv) {
    log << "validation failure: cannot write diagnostics.csv\n";
    return {kValidationFailure, "validation_failure", "output directory not writable", std::nullopt};
  }
  io::write_csv_header(csv);
  auto observer = [&](const State&, const DiagnosticsRecord& rec) {
    io::write_csv_row(csv, rec);
    csv.flush();
    outcome.last = rec;
  };

  solver::AdvanceOptions options;
  options.cadence_steps = config.cadence_steps;
  options.cadence_time = config.cadence_time;
  solver::AdvanceStats stats;

  auto times = config.snapshot_times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  json snapshots = json::array();
  try {
    bool first = true;
    for (std::size_t k = 0; k < times.size(); ++k) {
      options.observe_initial = first;
      state = solver::advance_to(state, times[k], params, observer, options, &stats);
      first = false;
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%03zu.txt", k);
      io::write_snapshot(config.output / name, state, params);
      snapshots.push_back({{"file", name}, {"tau", state.tau}});
    }
    options.observe_initial = first;
    state = solver::advance_to(state, params.t_end, params, observer, options, &stats);
  } catch (const std::exception& e) {
    const double tau = outcome.last ? outcome.last->tau : state.tau;
    log << "solver failure after tau = " << tau << ": " << e.what() << '\n';
    outcome.code = kSolverFailure;
    outcome.status = "solver_failure";
    outcome.message = e.what();
  }

  summary["status"] = outcome.status;
  summary["exit_code"] = outcome.code;
  if (!outcome.message.empty()) summary["message"] = outcome.message;
  summary["steps"] = stats.steps;
  summary["dt_halvings"] = stats.halvings;
  summary["final_tau"] = state.tau;
  summary["snapshots"] = snapshots;
  summary["entropy_invariance"] = number(verify::entropy_invariance(initial, state));
  const double v0 = total_volume(initial);
  summary["volume_drift_relative"] = number(std::abs(total_volume(state) - v0) / v0);
  if (outcome.last) summary["final_record"] = json::parse(io::to_json(*outcome.last));
  summary["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  write_json(config.output / "summary.json", summary);
  if (outcome.code == kOk)
    log << "run finished: tau = " << state.tau << ", " << stats.steps << " steps, outputs in "
        << config.output.string() << '\n';
  return outcome;
}

// One verify check: a verdict plus machine-readable details.
struct CheckResult {
  bool passed = false;
  json detail;
};

CheckResult check_entropy_and_volume(const SimParams& base, const init::PhysicalProfile& profile,
                                     double t_end, bool entropy) {
  CheckResult result{true, json::object()};
  for (auto f : {Formulation::primitive, Formulation::effective}) {
    SimParams p = base;
    p.formulation = f;
    const State initial = init::normalize_and_sample(profile, p);
    const State final_state = solver::advance_to(initial, t_end, p);
    const std::string key(to_string(f));
    if (entropy) {
      const double err = verify::entropy_invariance(initial, final_state);
      result.detail[key] = number(err);
      result.passed = result.passed && err == 0.0;
    } else {
      const double v0 = total_volume(initial);
      const double drift = std::abs(total_volume(final_state) - v0) / v0;
      result.detail[key] = number(drift);
      result.passed = result.passed && drift <= base.tol_volume;
    }
  }
  return result;
}

CheckResult check_steady(const SimParams& base, double t_end) {
  CheckResult result{true, json::object()};
  for (auto f : {Formulation::primitive, Formulation::effective}) {
    SimParams p = base;
    p.formulation = f;
    const State initial = init::normalize_and_sample(init::preset("isobaric_steady", {}, p), p);
    const State final_state = solver::advance_to(initial, t_end, p);
    const double drift =
        std::max(sup_diff(initial.rho, final_state.rho), sup_diff(initial.u, final_state.u));
    const double rate = t_end > 0.0 ? drift / t_end : drift;
    result.detail[std::string(to_string(f))] = number(rate);
    result.passed = result.passed && rate <= base.tol_steady;
  }
  return result;
}

CheckResult check_residual_refinement(const SimParams& base, const init::PhysicalProfile& profile,
                                      const std::vector<int>& levels, double t_end, bool bd) {
  std::vector<double> h, integrated;
  for (int cells : levels) {
    SimParams p = base;
    p.cells = cells;
    p.formulation = bd ? Formulation::effective : Formulation::primitive;
    const auto series = verify::residual_run(init::normalize_and_sample(profile, p), t_end, p);
    h.push_back(1.0 / cells);
    integrated.push_back(bd ? series.integrated_bd() : series.integrated_energy());
  }
  const auto fit = verify::fit_order(h, integrated);
  json values = json::array();
  for (double v : integrated) values.push_back(number(v));
  CheckResult result;
  result.passed = fit.order >= kOrderContract && strictly_decreasing(integrated);
  result.detail = {{"cells", levels}, {"integrated_residual", values}, {"order", number(fit.order)},
                   {"required_order", kOrderContract}};
  return result;
}

CheckResult check_bd_monotone(const SimParams& base, init::PhysicalProfile profile, double t_end) {
  profile.s0 = [](double) { return 0.0; };
  profile.isobaric_pressure.reset();
  SimParams p = base;
  p.formulation = Formulation::effective;
  double previous = 0.0, worst = -std::numeric_limits<double>::infinity();
  bool first = true;
  solver::advance_to(init::normalize_and_sample(profile, p), t_end, p,
                     [&](const State&, const DiagnosticsRecord& rec) {
                       if (!first) worst = std::max(worst, rec.e_bd - previous);
                       previous = rec.e_bd;
                       first = false;
                     });
  CheckResult result;
  result.passed = !(worst > kBdIncreaseTolerance);
  result.detail = {{"max_step_increase", number(worst)}, {"tolerance", kBdIncreaseTolerance}};
  return result;
}

CheckResult check_agreement(const SimParams& base, const init::PhysicalProfile& profile,
                            const std::vector<int>& levels, double t_end) {
  const auto report = verify::scheme_agreement(base, profile, t_end, levels);
  CheckResult result;
  result.passed = report.order.order >= kOrderContract && strictly_decreasing(report.gaps);
  result.detail = json::parse(io::to_json(report));
  result.detail["required_order"] = kOrderContract;
  return result;
}

verify::ManufacturedSolution pick_solution(const io::RunConfig& config) {
  if (config.mms_solution == "trigonometric") return verify::mms_trigonometric();
  if (config.mms_solution == "quiescent") return verify::mms_quiescent();
  return verify::mms_origin_regular(config.params.dimension);
}

std::string cell_label(std::size_t index, const SimParams& p, const init::PresetArgs& args) {
  std::ostringstream name;
  char buf[64];
  std::snprintf(buf, sizeof buf, "run_%03zu_N%d_g%g_M%d", index, p.dimension, p.gamma, p.cells);
  name << buf;
  for (const auto& [key, value] : args) {
    std::snprintf(buf, sizeof buf, "_%s%g", key.c_str(), value);
    name << buf;
  }
  return name.str();
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void apply(const Overrides& o, io::RunConfig& config) {
  if (o.workers) config.workers = *o.workers;
  if (o.out) config.output = *o.out;
  if (o.snapshot_times) config.snapshot_times = *o.snapshot_times;
  if (o.cadence) {
    const std::string& text = *o.cadence;
    const bool is_time = text.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_time) {
        config.cadence_time = std::stod(text, &used);
        if (!(config.cadence_time > 0.0)) throw io::ConfigError("--cadence must be > 0");
      } else {
        config.cadence_steps = std::stoi(text, &used);
        config.cadence_time = 0.0;
        if (config.cadence_steps < 1) throw io::ConfigError("--cadence must be >= 1");
      }
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const io::ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw io::ConfigError("--cadence: expected steps or a time interval, got '" + text + "'");
    }
  }
}

int cmd_run(const io::RunConfig& config, bool force, std::ostream& log) {
  return simulate(config, force, log).code;
}

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names = {
      "entropy_invariance",         "volume_conservation",    "steady_state",
      "energy_residual_refinement", "bd_residual_refinement", "bd_monotonicity",
      "scheme_agreement"};
  return names;
}

int cmd_verify(const io::RunConfig& config, std::ostream& log) {
  init::PhysicalProfile profile;
  std::vector<std::string> selected = config.checks.empty() ? verify_check_names() : config.checks;
  try {
    config.validate();
    for (const auto& name : selected)
      if (std::find(verify_check_names().begin(), verify_check_names().end(), name) ==
          verify_check_names().end())
        throw io::ConfigError("unknown verify check '" + name + "'");
    if (config.verify_levels.size() < 3) throw io::ConfigError("verify.levels needs 3 levels");
    profile = io::make_profile(config);
  } catch (const std::exception& e) {
    log << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  }

  const SimParams& p = config.params;
  const double t_end = config.verify_t_end;
  json report;
  report["params"] = json::parse(io::to_json(p));
  report["checks"] = json::array();
  std::vector<std::string> failed;
  for (const auto& name : selected) {
    CheckResult result;
    try {
      if (name == "entropy_invariance") result = check_entropy_and_volume(p, profile, t_end, true);
      else if (name == "volume_conservation") result = check_entropy_and_volume(p, profile, t_end, false);
      else if (name == "steady_state") result = check_steady(p, t_end);
      else if (name == "energy_residual_refinement")
        result = check_residual_refinement(p, profile, config.verify_levels, t_end, false);
      else if (name == "bd_residual_refinement")
        result = check_residual_refinement(p, profile, config.verify_levels, t_end, true);
      else if (name == "bd_monotonicity") result = check_bd_monotone(p, profile, t_end);
      else result = check_agreement(p, profile, config.verify_levels, t_end);
    } catch (const std::exception& e) {
      result = {false, {{"error", e.what()}}};
    }
    log << (result.passed ? "PASS " : "FAIL ") << name << ' ' << result.detail.dump() << '\n';
    if (!result.passed) failed.push_back(name);
    report["checks"].push_back({{"name", name}, {"passed", result.passed}, {"detail", result.detail}});
  }
  report["passed"] = failed.empty();
  report["failed"] = failed;
  try {
    fs::create_directories(config.output);
    write_json(config.output / "verify.json", report);
  } catch (const std::exception& e) {
    log << "cannot write report: " << e.what() << '\n';
  }
  if (!failed.empty()) {
    log << "verification failed:";
    for (const auto& name : failed) log << ' ' << name;
    log << '\n';
    return kVerificationFailure;
  }
  log << "all " << selected.size() << " checks passed\n";
  return kOk;
}

int cmd_converge(const io::RunConfig& config, std::ostream& log) {
  init::PhysicalProfile profile;
  try {
    config.validate();
    if (config.mms.space_levels.size() < 3 || config.mms.time_steps.size() < 3 ||
        config.agreement_levels.size() < 3)
      throw io::ConfigError("convergence studies need at least 3 levels");
    profile = io::make_profile(config);
  } catch (const std::exception& e) {
    log << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  }
  verify::ConvergenceReport mms;
  verify::AgreementReport agreement;
  try {
    mms = verify::mms_convergence(config.params, pick_solution(config), config.mms);
    agreement = verify::scheme_agreement(config.params, profile, config.agreement_t_end,
                                         config.agreement_levels);
  } catch (const std::invalid_argument& e) {
    log << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    log << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  const bool space_ok = mms.space_order.order >= kSpaceOrderContract;
  const bool time_ok = mms.time_order.order >= kOrderContract;
  const bool agreement_ok =
      agreement.order.order >= kOrderContract && strictly_decreasing(agreement.gaps);
  json report = {{"params", json::parse(io::to_json(config.params))},
                 {"mms", json::parse(io::to_json(mms))},
                 {"agreement", json::parse(io::to_json(agreement))},
                 {"contract",
                  {{"space_order_min", kSpaceOrderContract},
                   {"time_order_min", kOrderContract},
                   {"agreement_order_min", kOrderContract},
                   {"space_ok", space_ok},
                   {"time_ok", time_ok},
                   {"agreement_ok", agreement_ok}}}};
  try {
    fs::create_directories(config.output);
    write_json(config.output / "converge.json", report);
  } catch (const std::exception& e) {
    log << "cannot write report: " << e.what() << '\n';
  }
  log << "space order " << mms.space_order.order << ", time order " << mms.time_order.order
      << ", agreement order " << agreement.order.order << '\n';
  return space_ok && time_ok && agreement_ok ? kOk : kVerificationFailure;
}

int cmd_sweep(const io::RunConfig& config, bool force, std::ostream& log) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    log << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  }
  const auto& grid = config.sweep;
  const std::vector<int> dims = grid.dimensions.empty() ? std::vector<int>{config.params.dimension}
                                                        : grid.dimensions;
  const std::vector<double> gammas =
      grid.gammas.empty() ? std::vector<double>{config.params.gamma} : grid.gammas;
  const std::vector<int> cells = grid.cells.empty() ? std::vector<int>{config.params.cells} : grid.cells;

  // Cartesian product of the preset-argument axes.
  std::vector<init::PresetArgs> arg_sets = {config.preset_args};
  for (const auto& [key, values] : grid.preset_args) {
    std::vector<init::PresetArgs> next;
    for (const auto& base : arg_sets)
      for (double v : values) {
        auto a = base;
        a[key] = v;
        next.push_back(std::move(a));
      }
    arg_sets = std::move(next);
  }

  std::vector<io::RunConfig> jobs;
  for (int n : dims)
    for (double g : gammas)
      for (int m : cells)
        for (const auto& args : arg_sets) {
          io::RunConfig job = config;
          job.params.dimension = n;
          job.params.gamma = g;
          job.params.cells = m;
          job.preset_args = args;
          job.output = config.output / cell_label(jobs.size(), job.params, args);
          jobs.push_back(std::move(job));
        }

  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) {
    log << "validation failure: cannot create '" << config.output.string() << "'\n";
    return kValidationFailure;
  }

  std::vector<RunOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  {
    const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
    std::vector<std::jthread> pool;
    for (int k = 0; k < workers; ++k)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
          std::ostringstream job_log;
          std::error_code dir_error;
          fs::create_directories(jobs[i].output, dir_error);
          try {
            outcomes[i] = simulate(jobs[i], force, job_log);
          } catch (const std::exception& e) {
            outcomes[i] = {kSolverFailure, "solver_failure", e.what(), std::nullopt};
            job_log << "failure: " << e.what() << '\n';
          }
          std::ofstream(jobs[i].output / "log.txt") << job_log.str();
          const std::lock_guard lock(log_mutex);
          log << jobs[i].output.filename().string() << ": " << outcomes[i].status << '\n';
        }
      });
  }

  std::ofstream rollup(config.output / "rollup.csv");
  rollup << "run,dimension,gamma,cells";
  for (const auto& [key, value] : arg_sets.front()) rollup << ",preset." << key;
  rollup << ",status,exit_code";
  for (auto column : io::kCsvColumns) rollup << ',' << column;
  rollup << '\n';
  int worst = kOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    rollup << job.output.filename().string() << ',' << job.params.dimension << ','
           << fmt17(job.params.gamma) << ',' << job.params.cells;
    for (const auto& [key, value] : job.preset_args) rollup << ',' << fmt17(value);
    rollup << ',' << (outcomes[i].code == kOk ? "ok" : "failed:" + outcomes[i].status) << ','
           << outcomes[i].code;
    if (outcomes[i].last) {
      std::ostringstream row;
      io::write_csv_row(row, *outcomes[i].last);
      rollup << ',' << row.str();
    } else {
      rollup << std::string(io::kCsvColumns.size(), ',') << '\n';
    }
    worst = std::max(worst, outcomes[i].code);
  }
  log << "sweep finished: " << jobs.size() << " runs, rollup in "
      << (config.output / "rollup.csv").string() << '\n';
  return worst;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lagrangian solver for radially symmetric viscous shallow water with entropy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lagsw 0.1.0");

  std::string config_path;
  Overrides overrides;
  std::string cadence;
  std::vector<double> snapshot_times;
  int workers = 0;
  std::string out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--force", overrides.force, "run even when the initial data fail the hypotheses");
    sub->add_option("--workers", workers, "sweep worker count")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--cadence", cadence, "record every K steps, or every T time units if T has a '.'");
    sub->add_option("--snapshot-times", snapshot_times, "snapshot times")->delimiter(',');
  };
  auto* run = app.add_subcommand("run", "run one simulation");
  auto* ver = app.add_subcommand("verify", "run the property suite");
  auto* conv = app.add_subcommand("converge", "manufactured-solution and agreement refinement");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over a worker pool");
  for (auto* sub : {run, ver, conv, sweep}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidationFailure;
  }

  io::RunConfig config;
  try {
    config = io::load_config(config_path);
    if (workers > 0) overrides.workers = workers;
    if (!out_dir.empty()) overrides.out = out_dir;
    if (!cadence.empty()) overrides.cadence = cadence;
    if (!snapshot_times.empty()) overrides.snapshot_times = snapshot_times;
    apply(overrides, config);
  } catch (const std::exception& e) {
    err << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  }

  if (*run) return cmd_run(config, overrides.force, out);
  if (*ver) return cmd_verify(config, out);
  if (*conv) return cmd_converge(config, out);
  return cmd_sweep(config, overrides.force, out);
}

}  // namespace lagsw::cli
