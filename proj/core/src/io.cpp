#include "lagsw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "lagsw/model.hpp"

namespace lagsw::io {
namespace {

using nlohmann::json;

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw ConfigError("'" + std::string(what) + "': expected a number, got '" + s + "'");
  return value;
}

int parse_int(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  int value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw ConfigError("'" + std::string(what) + "': expected an integer, got '" + s + "'");
  return value;
}

std::vector<double> parse_doubles(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part, what));
  return out;
}

std::vector<int> parse_ints(std::string_view text, std::string_view what) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_int(part, what));
  return out;
}

// Reads a double from a data file, where failures are format errors.
double data_double(std::string_view token, std::string_view where) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size())
    throw FormatError(std::string(where) + ": bad number '" + std::string(token) + "'");
  return value;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

// Non-finite values are not representable in JSON; they become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json fit_json(const verify::OrderFit& fit) {
  return {{"order", number(fit.order)}, {"fit_residual", number(fit.residual)}};
}

json levels_json(const std::vector<verify::ConvergenceLevel>& levels) {
  json out = json::array();
  for (const auto& l : levels)
    out.push_back({{"cells", l.cells},
                   {"dt", number(l.dt)},
                   {"error_rho", number(l.error_rho)},
                   {"error_u", number(l.error_u)},
                   {"error", number(l.error)}});
  return out;
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number_of_line) + ": expected key = value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(number_of_line) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(number_of_line) + ": duplicate key '" + key + "'");
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_key_values(in);
}

const std::vector<std::pair<std::string_view, std::string_view>>& config_keys() {
  static const std::vector<std::pair<std::string_view, std::string_view>> keys = {
      {"dimension", "N, 2 or 3"},
      {"gamma", "adiabatic index, > 1"},
      {"domain_radius", "R, length"},
      {"cells", "M, number of mass cells"},
      {"cfl", "CFL fraction in (0, 1]"},
      {"dt", "fixed time step; overrides cfl"},
      {"t_end", "final time tau"},
      {"formulation", "primitive or effective"},
      {"origin_weight_xi", "xi of the weighted origin norm, in (0, 1)"},
      {"tol_volume", "tolerance"},
      {"tol_energy", "tolerance"},
      {"tol_steady", "tolerance"},
      {"dissipation_kappa", "coefficient of u^2/r^2 in D_basic; default 2(N-1)"},
      {"preset", "named initial profile"},
      {"preset.<arg>", "preset argument"},
      {"profile.rho", "two-column (r, rho0) file"},
      {"profile.u", "two-column (r, u0) file"},
      {"profile.s", "two-column (r, s0) file"},
      {"profile.snapshot", "snapshot reused as initial data"},
      {"output", "output directory"},
      {"cadence_steps", "record every k steps"},
      {"cadence_time", "record every delta tau (overrides cadence_steps)"},
      {"snapshot_times", "comma-separated list of tau"},
      {"verify.checks", "comma-separated subset of the verify suite"},
      {"verify.levels", "comma-separated cell counts"},
      {"verify.t_end", "horizon of the refinement runs"},
      {"converge.solution", "origin_regular, trigonometric or quiescent"},
      {"converge.space_levels", "comma-separated cell counts"},
      {"converge.time_steps", "comma-separated dt values"},
      {"converge.time_cells", "cells of the temporal study"},
      {"converge.t_end", "manufactured-solution horizon"},
      {"converge.dt_coefficient", "spatial study uses dt = c dy^2"},
      {"converge.agreement_levels", "comma-separated cell counts"},
      {"converge.agreement_t_end", "horizon of the agreement runs"},
      {"sweep.dimension", "comma-separated list"},
      {"sweep.gamma", "comma-separated list"},
      {"sweep.cells", "comma-separated list"},
      {"sweep.preset.<arg>", "comma-separated list"},
      {"workers", "sweep worker count"},
  };
  return keys;
}

RunConfig from_key_values(const KeyValues& kv) {
  RunConfig c;
  auto& p = c.params;
  std::optional<double> cfl, dt;
  for (const auto& [key, value] : kv) {
    const std::string_view k = key;
    if (k == "dimension") p.dimension = parse_int(value, k);
    else if (k == "gamma") p.gamma = parse_double(value, k);
    else if (k == "domain_radius") p.domain_radius = parse_double(value, k);
    else if (k == "cells") p.cells = parse_int(value, k);
    else if (k == "cfl") cfl = parse_double(value, k);
    else if (k == "dt") dt = parse_double(value, k);
    else if (k == "t_end") p.t_end = parse_double(value, k);
    else if (k == "formulation") {
      try {
        p.formulation = parse_formulation(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    else if (k == "origin_weight_xi") p.origin_weight_xi = parse_double(value, k);
    else if (k == "tol_volume") p.tol_volume = parse_double(value, k);
    else if (k == "tol_energy") p.tol_energy = parse_double(value, k);
    else if (k == "tol_steady") p.tol_steady = parse_double(value, k);
    else if (k == "dissipation_kappa") p.dissipation_kappa = parse_double(value, k);
    else if (k == "preset") c.preset = value;
    else if (k.starts_with("preset.")) c.preset_args[std::string(k.substr(7))] = parse_double(value, k);
    else if (k == "profile.rho") c.profile_rho = value;
    else if (k == "profile.u") c.profile_u = value;
    else if (k == "profile.s") c.profile_s = value;
    else if (k == "profile.snapshot") c.profile_snapshot = value;
    else if (k == "output") c.output = value;
    else if (k == "cadence_steps") c.cadence_steps = parse_int(value, k);
    else if (k == "cadence_time") c.cadence_time = parse_double(value, k);
    else if (k == "snapshot_times") c.snapshot_times = value.empty() ? std::vector<double>{} : parse_doubles(value, k);
    else if (k == "verify.checks") c.checks = split(value, ',');
    else if (k == "verify.levels") c.verify_levels = parse_ints(value, k);
    else if (k == "verify.t_end") c.verify_t_end = parse_double(value, k);
    else if (k == "converge.solution") c.mms_solution = value;
    else if (k == "converge.space_levels") c.mms.space_levels = parse_ints(value, k);
    else if (k == "converge.time_steps") c.mms.time_steps = parse_doubles(value, k);
    else if (k == "converge.time_cells") c.mms.time_cells = parse_int(value, k);
    else if (k == "converge.t_end") c.mms.t_end = parse_double(value, k);
    else if (k == "converge.dt_coefficient") c.mms.dt_coefficient = parse_double(value, k);
    else if (k == "converge.agreement_levels") c.agreement_levels = parse_ints(value, k);
    else if (k == "converge.agreement_t_end") c.agreement_t_end = parse_double(value, k);
    else if (k == "sweep.dimension") c.sweep.dimensions = parse_ints(value, k);
    else if (k == "sweep.gamma") c.sweep.gammas = parse_doubles(value, k);
    else if (k == "sweep.cells") c.sweep.cells = parse_ints(value, k);
    else if (k.starts_with("sweep.preset.")) c.sweep.preset_args[std::string(k.substr(13))] = parse_doubles(value, k);
    else if (k == "workers") c.workers = parse_int(value, k);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  if (dt) p.dt_policy = DtPolicy::fixed(*dt);
  else if (cfl) p.dt_policy = DtPolicy::cfl(*cfl);
  return c;
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cadence_steps < 1) throw ConfigError("cadence_steps must be >= 1");
  if (cadence_time < 0.0) throw ConfigError("cadence_time must be >= 0");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= params.t_end))
      throw ConfigError("snapshot time " + fmt17(t) + " outside [0, t_end]");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if ((!profile_u.empty() || !profile_s.empty()) && profile_rho.empty())
    throw ConfigError("profile.u / profile.s need profile.rho");
  if (mms_solution != "origin_regular" && mms_solution != "trigonometric" &&
      mms_solution != "quiescent")
    throw ConfigError("unknown converge.solution '" + mms_solution + "'");
  if (!profile_rho.empty() && !profile_snapshot.empty())
    throw ConfigError("profile.rho and profile.snapshot are exclusive");
}

RunConfig load_config(const std::filesystem::path& path) {
  return from_key_values(read_key_values(path));
}

init::PhysicalProfile make_profile(const RunConfig& config) {
  if (!config.profile_snapshot.empty())
    return profile_from_snapshot(read_snapshot(config.profile_snapshot));
  if (!config.profile_rho.empty()) {
    init::PhysicalProfile profile;
    profile.name = "tabulated";
    auto load = [](const std::filesystem::path& path) {
      auto [r, v] = read_two_columns(path);
      return init::tabulated(std::move(r), std::move(v));
    };
    profile.rho0 = load(config.profile_rho);
    profile.u0 = config.profile_u.empty() ? init::RadialFunction([](double) { return 0.0; })
                                          : load(config.profile_u);
    profile.s0 = config.profile_s.empty() ? init::RadialFunction([](double) { return 0.0; })
                                          : load(config.profile_s);
    return profile;
  }
  try {
    return init::preset(config.preset, config.preset_args, config.params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void write_csv_header(std::ostream& out) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
  const std::array<double, 20> values = {
      r.tau,   r.mass,  r.total_volume, r.e_basic, r.d_basic, r.e_bd,  r.d_bd,
      r.s_bd,  r.rho_min, r.rho_max,    r.s_min,   r.s_max,   r.sup_u, r.sup_w,
      r.l4_u,  r.l4_w,  r.l2_grad_rho_weighted, r.weighted_origin_norm,
      r.energy_residual, r.bd_residual};
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    // Residuals are undefined before the first step; leave the cells empty.
    if (i >= 18 && !r.has_residuals) continue;
    out << fmt17(values[i]);
  }
  out << '\n';
}

std::vector<DiagnosticsRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: missing header");
  const auto header = split(line, ',');
  if (header.size() != kCsvColumns.size() ||
      !std::equal(header.begin(), header.end(), kCsvColumns.begin()))
    throw FormatError("csv: header does not match the diagnostics columns");
  std::vector<DiagnosticsRecord> rows;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != kCsvColumns.size())
      throw FormatError("csv row " + std::to_string(row) + ": expected 20 fields");
    const std::string where = "csv row " + std::to_string(row);
    std::array<double, 20> v{};
    for (std::size_t i = 0; i < 18; ++i) v[i] = data_double(cells[i], where);
    DiagnosticsRecord r;
    r.has_residuals = !cells[18].empty();
    if (r.has_residuals) {
      v[18] = data_double(cells[18], where);
      v[19] = data_double(cells[19], where);
    }
    r.tau = v[0];
    r.mass = v[1];
    r.total_volume = v[2];
    r.e_basic = v[3];
    r.d_basic = v[4];
    r.e_bd = v[5];
    r.d_bd = v[6];
    r.s_bd = v[7];
    r.rho_min = v[8];
    r.rho_max = v[9];
    r.s_min = v[10];
    r.s_max = v[11];
    r.sup_u = v[12];
    r.sup_w = v[13];
    r.l4_u = v[14];
    r.l4_w = v[15];
    r.l2_grad_rho_weighted = v[16];
    r.weighted_origin_norm = v[17];
    r.energy_residual = v[18];
    r.bd_residual = v[19];
    rows.push_back(r);
  }
  return rows;
}

void write_snapshot(std::ostream& out, const State& state, const SimParams& params) {
  const int m = state.cells();
  const MassGrid grid = state.grid();
  const auto w = effective_velocity(state, params).w;
  const auto p = cell_pressure(state, params.gamma);
  out << "# lagsw snapshot\n"
      << "format_version " << kSnapshotVersion << '\n'
      << "dimension " << params.dimension << '\n'
      << "gamma " << fmt17(params.gamma) << '\n'
      << "domain_radius " << fmt17(params.domain_radius) << '\n'
      << "cells " << m << '\n'
      << "tau " << fmt17(state.tau) << '\n'
      << "nodes y r u w\n";
  for (int j = 0; j <= m; ++j)
    out << fmt17(grid.node(j)) << ' ' << fmt17(state.r[j]) << ' ' << fmt17(state.u[j]) << ' '
        << fmt17(w[j]) << '\n';
  out << "cells y_center rho s P\n";
  for (int i = 0; i < m; ++i)
    out << fmt17(grid.center(i)) << ' ' << fmt17(state.rho[i]) << ' ' << fmt17(state.s[i]) << ' '
        << fmt17(p[i]) << '\n';
}

void write_snapshot(const std::filesystem::path& path, const State& state, const SimParams& params) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  write_snapshot(out, state, params);
  if (!out) throw FormatError("write failed for '" + path.string() + "'");
}

Snapshot read_snapshot(std::istream& in) {
  Snapshot snap;
  std::string line;
  auto next = [&](std::string_view what) {
    while (std::getline(in, line)) {
      if (!trim(line).empty() && line[0] != '#') return;
    }
    throw FormatError("snapshot: unexpected end of file before " + std::string(what));
  };
  auto field = [&](std::string_view name) {
    next(name);
    std::istringstream ss(line);
    std::string key, value;
    ss >> key >> value;
    if (key != name) throw FormatError("snapshot: expected '" + std::string(name) + "', got '" + key + "'");
    return value;
  };
  snap.version = static_cast<int>(data_double(field("format_version"), "snapshot"));
  if (snap.version != kSnapshotVersion)
    throw FormatError("snapshot: unsupported format version " + std::to_string(snap.version));
  snap.dimension = static_cast<int>(data_double(field("dimension"), "snapshot"));
  snap.gamma = data_double(field("gamma"), "snapshot");
  snap.domain_radius = data_double(field("domain_radius"), "snapshot");
  const double cells = data_double(field("cells"), "snapshot");
  if (!(cells >= 1.0) || cells != std::floor(cells)) throw FormatError("snapshot: bad cell count");
  const int m = static_cast<int>(cells);
  snap.state.tau = data_double(field("tau"), "snapshot");

  auto rows = [&](int count, std::size_t width, std::string_view section) {
    std::vector<std::vector<double>> out;
    for (int k = 0; k < count; ++k) {
      next(section);
      std::istringstream ss(line);
      std::vector<double> row;
      std::string token;
      while (ss >> token) row.push_back(data_double(token, "snapshot " + std::string(section)));
      if (row.size() != width)
        throw FormatError("snapshot: " + std::string(section) + " row has " + std::to_string(row.size()) +
                          " fields");
      out.push_back(std::move(row));
    }
    return out;
  };
  field("nodes");
  for (const auto& row : rows(m + 1, 4, "nodes")) {
    snap.state.r.push_back(row[1]);
    snap.state.u.push_back(row[2]);
    snap.w.push_back(row[3]);
  }
  field("cells");
  for (const auto& row : rows(m, 4, "cells")) {
    snap.state.rho.push_back(row[1]);
    snap.state.s.push_back(row[2]);
    snap.pressure.push_back(row[3]);
  }
  while (std::getline(in, line))
    if (!trim(line).empty() && line[0] != '#') throw FormatError("snapshot: trailing data");
  if (const auto problem = check_state(snap.state); !problem.empty())
    throw FormatError("snapshot: " + problem);
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_snapshot(in);
}

init::PhysicalProfile profile_from_snapshot(const Snapshot& snapshot) {
  const auto& st = snapshot.state;
  const int n = snapshot.dimension;
  std::vector<double> rc(st.rho.size());
  for (std::size_t i = 0; i < rc.size(); ++i) {
    const double mid = 0.5 * (ipow(st.r[i], n) + ipow(st.r[i + 1], n));
    rc[i] = n == 2 ? std::sqrt(mid) : std::cbrt(mid);
  }
  init::PhysicalProfile profile;
  profile.name = "snapshot";
  profile.rho0 = init::tabulated(rc, st.rho);
  profile.s0 = init::tabulated(rc, st.s);
  auto u = st.u;
  u.front() = 0.0;
  u.back() = 0.0;
  profile.u0 = init::tabulated(st.r, std::move(u));
  return profile;
}

std::pair<std::vector<double>, std::vector<double>> read_two_columns(std::istream& in) {
  std::vector<double> r, v;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    std::string spaced = body;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream ss(spaced);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw FormatError("table line " + std::to_string(row) + ": expected two columns");
    const std::string where = "table line " + std::to_string(row);
    r.push_back(data_double(a, where));
    v.push_back(data_double(b, where));
    if (r.size() > 1 && !(r.back() > r[r.size() - 2]))
      throw FormatError(where + ": radii must be strictly increasing");
  }
  if (r.size() < 2) throw FormatError("table: need at least two rows");
  return {std::move(r), std::move(v)};
}

std::pair<std::vector<double>, std::vector<double>> read_two_columns(
    const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_two_columns(in);
}

std::string to_json(const SimParams& p) {
  json j = {{"dimension", p.dimension},
            {"gamma", p.gamma},
            {"domain_radius", p.domain_radius},
            {"cells", p.cells},
            {"dt_policy", p.dt_policy.kind == DtPolicy::Kind::cfl ? "cfl" : "fixed"},
            {"dt_value", p.dt_policy.value},
            {"t_end", p.t_end},
            {"formulation", std::string(to_string(p.formulation))},
            {"origin_weight_xi", p.origin_weight_xi},
            {"dissipation_kappa", p.kappa()}};
  return j.dump(2);
}

std::string to_json(const init::HypothesisReport& r) {
  json j = {{"passed", r.passed()},
            {"failures", r.failures},
            {"rho_lower", number(r.rho_lower)},
            {"rho_upper", number(r.rho_upper)},
            {"s_lower", number(r.s_lower)},
            {"s_upper", number(r.s_upper)},
            {"entropy_slope_sup", number(r.entropy_slope_sup)},
            {"gamma_ok", r.gamma_ok}};
  return j.dump(2);
}

std::string to_json(const DiagnosticsRecord& r) {
  const std::array<double, 20> values = {
      r.tau,   r.mass,  r.total_volume, r.e_basic, r.d_basic, r.e_bd,  r.d_bd,
      r.s_bd,  r.rho_min, r.rho_max,    r.s_min,   r.s_max,   r.sup_u, r.sup_w,
      r.l4_u,  r.l4_w,  r.l2_grad_rho_weighted, r.weighted_origin_norm,
      r.energy_residual, r.bd_residual};
  json j = json::object();
  for (std::size_t i = 0; i < values.size(); ++i)
    j[std::string(kCsvColumns[i])] = (i >= 18 && !r.has_residuals) ? json(nullptr) : number(values[i]);
  return j.dump(2);
}

std::string to_json(const verify::ConvergenceReport& r) {
  json j = {{"solution", r.solution},
            {"dimension", r.dimension},
            {"space", levels_json(r.space)},
            {"time", levels_json(r.time)},
            {"space_order", fit_json(r.space_order)},
            {"time_order", fit_json(r.time_order)}};
  return j.dump(2);
}

std::string to_json(const verify::AgreementReport& r) {
  json gaps = json::array();
  for (double g : r.gaps) gaps.push_back(number(g));
  json j = {{"cells", r.cells}, {"gaps", gaps}, {"order", fit_json(r.order)}};
  return j.dump(2);
}

std::string to_json(const verify::KappaReport& r) {
  json j = {{"dimension", r.dimension},
            {"candidate_a", r.candidate_a},
            {"candidate_b", r.candidate_b},
            {"integrated_residual_a", number(r.integrated_a)},
            {"integrated_residual_b", number(r.integrated_b)},
            {"selected", r.selected},
            {"separation", number(r.separation)}};
  return j.dump(2);
}

std::string to_json(const verify::LargeTimeReport& r) {
  json j = {{"passed", r.passed},
            {"note", r.note},
            {"mean_density", number(r.mean_density)},
            {"deviation_trending_down", r.deviation_trending_down},
            {"gradient_trending_down", r.gradient_trending_down},
            {"final_density_deviation", r.density_deviation.empty() ? json(nullptr) : number(r.density_deviation.back())},
            {"final_gradient_norm", r.gradient_norm.empty() ? json(nullptr) : number(r.gradient_norm.back())}};
  return j.dump(2);
}

}  // namespace lagsw::io
