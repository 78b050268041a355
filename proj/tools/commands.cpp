// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "qabos/dynamics.hpp"
#include "qabos/el_solver.hpp"
#include "qabos/lagrangian.hpp"
#include "qabos/model_io.hpp"
#include "qabos/spectral.hpp"

namespace qabos::cli
{

namespace
{

using nlohmann::json;

[[noreturn]] void invalid(const std::string &what)
{
  throw Error(ErrorCode::kInvalidArgument, what);
}

std::string number(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

class Table
{
public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string csv() const
  {
    std::ostringstream os;
    write_row(os, header_);
    for (const auto &r : rows_) write_row(os, r);
    return os.str();
  }

  json to_json() const
  {
    json rows = json::array();
    for (const auto &r : rows_) {
      json obj = json::object();
      for (std::size_t i = 0; i < header_.size(); ++i) {
        const std::string &cell = r[i];
        char *end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end && *end == '\0')
          obj[header_[i]] = v;
        else
          obj[header_[i]] = cell;
      }
      rows.push_back(obj);
    }
    return rows;
  }

private:
  static void write_row(std::ostringstream &os, const std::vector<std::string> &r)
  {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

Outputs emit(const RunConfig &config, const std::string &stem,
             const std::vector<std::pair<std::string, const Table *>> &tables,
             const json &meta = json())
{
  Outputs out;
  if (config.format == Format::kCsv) {
    for (const auto &[name, table] : tables) out[stem + "_" + name + ".csv"] = table->csv();
    if (!meta.is_null()) out[stem + "_meta.json"] = meta.dump(2) + "\n";
  } else {
    json doc = json::object();
    for (const auto &[name, table] : tables) doc[name] = table->to_json();
    if (!meta.is_null()) doc["meta"] = meta;
    out[stem + ".json"] = doc.dump(2) + "\n";
  }
  return out;
}

std::vector<int> parse_truth_table(const std::string &text)
{
  std::vector<int> table;
  for (char c : text) {
    if (c == '0' || c == '1')
      table.push_back(c - '0');
    else if (c != ',' && c != ' ')
      invalid("truth table must contain only 0 and 1");
  }
  return table;
}

RVector to_vector(const std::vector<double> &v)
{
  return Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

CMatrix ground_state(const CMatrix &h)
{
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector v = es.eigenvectors().col(0);
  return v * v.adjoint();
}

std::vector<double> gamma_list(const RunConfig &config)
{
  return config.gammas.empty() ? std::vector<double>{config.params.gamma} : config.gammas;
}

ModelPreset resolve(const RunConfig &config, double gamma)
{
  if (!config.model_file.empty()) {
    LindbladModel model = load_model_file(config.model_file);
    const int m = model.drive_arity();
    if (static_cast<int>(config.start.size()) != m || static_cast<int>(config.end.size()) != m)
      invalid("--start and --end need " + std::to_string(m) + " values for this model");
    Boundary boundary{to_vector(config.start), to_vector(config.end)};
    const CMatrix rho0 = ground_state(model.hamiltonian(boundary.start));
    const CMatrix target = ground_state(model.hamiltonian(boundary.end));
    return ModelPreset{"custom",
                       std::move(model),
                       Constraint::identity(m),
                       boundary,
                       GapPolicy::automatic(),
                       rho0,
                       target,
                       {},
                       {}};
  }
  PresetParams params = config.params;
  params.gamma = gamma;
  if (!config.truth_table.empty()) params.truth_table = parse_truth_table(config.truth_table);
  return make_preset(config.model, params);
}

bool has_adiabatic_reference(const ModelPreset &preset)
{
  return preset.name.rfind("stirap-balanced", 0) == 0;
}

std::vector<double> tau_list(const RunConfig &config)
{
  return config.taus.empty() ? std::vector<double>{10.0} : config.taus;
}

Schedule brachistochrone(const ModelPreset &preset, const RunConfig &config)
{
  SolverOptions options;
  options.grid_points = config.grid;
  return solve_bvp(preset.liouvillian(), preset.constraint, preset.boundary,
                   preset.lagrangian_config(), options)
    .schedule;
}

/// Target state for total time τ: the closed-form adiabatic endpoint when
/// available, the preset target otherwise.
std::function<CMatrix(double)> target_for(const ModelPreset &preset, const Schedule &schedule,
                                          double gamma, double omega0)
{
  if (has_adiabatic_reference(preset)) {
    auto reference = std::make_shared<StirapAdiabatic>(gamma, omega0, schedule);
    return [reference](double tau) { return reference->final_density(tau); };
  }
  const CMatrix target = preset.target_state;
  return [target](double) { return target; };
}

/// Memoizes 𝓘(τ); scans for several targets reuse the same τ grid.
InfidelityCurve cached(InfidelityCurve curve)
{
  struct Cache
  {
    std::mutex mutex;
    std::map<double, double> values;
  };
  auto cache = std::make_shared<Cache>();
  return [curve = std::move(curve), cache](double tau) {
    {
      std::lock_guard<std::mutex> lock(cache->mutex);
      auto it = cache->values.find(tau);
      if (it != cache->values.end()) return it->second;
    }
    const double v = curve(tau);
    std::lock_guard<std::mutex> lock(cache->mutex);
    cache->values.emplace(tau, v);
    return v;
  };
}

ScanOptions scan_options(const RunConfig &config)
{
  ScanOptions o;
  o.tau_min = config.tau_min;
  o.tau_max = config.tau_max;
  o.points = config.scan_points;
  o.threads = config.threads;
  return o;
}

Schedule chosen_schedule(const ModelPreset &preset, const RunConfig &config)
{
  return config.schedule == "linear" ? preset.linear_schedule() : brachistochrone(preset, config);
}

}  // namespace

void validate(const RunConfig &config)
{
  if (config.grid < 11 || config.grid % 2 == 0) invalid("--grid must be odd and at least 11");
  for (double t : config.taus)
    if (!(t > 0.0)) invalid("--tau values must be positive");
  for (double g : config.gammas)
    if (!(g >= 0.0)) invalid("--gamma values must be non-negative");
  for (double t : config.targets)
    if (!(t > 0.0 && t < 1.0)) invalid("--target values must lie in (0, 1)");
  if (!(config.tau_min > 0.0 && config.tau_max > config.tau_min))
    invalid("need 0 < --tau-min < --tau-max");
  if (config.scan_points < 2) invalid("--points must be at least 2");
  if (config.threads < 1) invalid("thread count must be positive");
  if (config.schedule != "linear" && config.schedule != "brachistochrone")
    invalid("--schedule must be linear or brachistochrone");
  if (!config.model_file.empty() && (config.subcommand == "compare" || config.subcommand == "sweep"))
    invalid(config.subcommand + " needs a preset model");
  if (config.model_file.empty()) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), config.model) == names.end())
      invalid("unknown model '" + config.model + "'");
  }
  // Builds every requested model once so that bad parameters fail here.
  for (double g : gamma_list(config)) {
    const ModelPreset preset = resolve(config, g);
    if (has_adiabatic_reference(preset) && (config.subcommand == "compare" || config.subcommand == "sweep"))
      StirapAdiabatic(g, config.params.omega0, preset.linear_schedule());
  }
}

Outputs cmd_spectrum(const RunConfig &config)
{
  const double gamma = gamma_list(config).front();
  const ModelPreset preset = resolve(config, gamma);
  SuperoperatorForm form = SuperoperatorForm::kReducedIfUnital;
  if (config.form == "full" || (config.form == "auto" && preset.model.dimension() == 2)) {
    form = SuperoperatorForm::kFull;
  } else if (config.form == "reduced") {
    form = SuperoperatorForm::kReduced;
  }
  const Liouvillian l(preset.model, form);
  const Schedule schedule = preset.linear_schedule();
  const auto grid = uniform_grid(config.grid);
  TrackOptions track;
  track.threads = config.threads;
  const SpectralBranches branches = track_branches(l, schedule, grid, track);
  const GapCurve gap = min_nonvanishing_gap(branches, preset.gap);

  std::vector<std::string> header{"s"};
  for (int a = 0; a < branches.size(); ++a) {
    header.push_back("re_" + std::to_string(a));
    header.push_back("im_" + std::to_string(a));
  }
  Table bt(header);
  Table gt({"s", "re_gap", "im_gap", "abs_gap"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    std::vector<std::string> r{number(grid[i])};
    for (int a = 0; a < branches.size(); ++a) {
      r.push_back(number(branches.values(row, a).real()));
      r.push_back(number(branches.values(row, a).imag()));
    }
    bt.add(std::move(r));
    const cplx g = gap.values(row);
    gt.add({number(grid[i]), number(g.real()), number(g.imag()), number(std::abs(g))});
  }
  json meta{{"model", preset.name},
            {"gamma", gamma},
            {"superoperator_side", l.side()},
            {"reduced", l.reduced()},
            {"multiplicity", branches.multiplicity}};
  return emit(config, "spectrum", {{"branches", &bt}, {"gap", &gt}}, meta);
}

Outputs cmd_solve(const RunConfig &config)
{
  const double gamma = gamma_list(config).front();
  const ModelPreset preset = resolve(config, gamma);
  SolverOptions options;
  options.grid_points = config.grid;
  const BVPSolution sol = solve_bvp(preset.liouvillian(), preset.constraint, preset.boundary,
                                    preset.lagrangian_config(), options);
  if (!sol.converged)
    throw Error(ErrorCode::kNonConvergence, "boundary residual " + number(sol.residual));

  const int m = preset.constraint.reduced_size();
  const int k = preset.constraint.drive_size();
  std::vector<std::string> header{"s"};
  for (int i = 0; i < m; ++i) header.push_back("p_" + std::to_string(i));
  for (int i = 0; i < m; ++i) header.push_back("dp_" + std::to_string(i));
  for (int i = 0; i < k; ++i) header.push_back("q_" + std::to_string(i));
  Table t(header);
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    std::vector<std::string> r{number(sol.grid[i])};
    for (int j = 0; j < m; ++j) r.push_back(number(sol.values(row, j)));
    for (int j = 0; j < m; ++j) r.push_back(number(sol.slopes(row, j)));
    const RVector q = preset.constraint.apply(sol.values.row(row).transpose());
    for (int j = 0; j < k; ++j) r.push_back(number(q(j)));
    t.add(std::move(r));
  }
  json meta{{"model", preset.name},          {"gamma", gamma},
            {"converged", sol.converged},     {"residual", sol.residual},
            {"iterations", sol.iterations},   {"condition1_path", sol.condition1_path},
            {"warnings", preset.warnings}};
  return emit(config, "solve", {{"schedule", &t}}, meta);
}

Outputs cmd_simulate(const RunConfig &config)
{
  const double gamma = gamma_list(config).front();
  const ModelPreset preset = resolve(config, gamma);
  const Schedule schedule = chosen_schedule(preset, config);
  const Liouvillian l = preset.liouvillian();
  const int d = preset.model.dimension();
  std::vector<std::string> header{"tau", "s", "infidelity", "trace_distance"};
  for (int i = 0; i < d; ++i) header.push_back("population_" + std::to_string(i));
  Table t(header);
  PropagationOptions options;
  options.points = config.grid;
  for (double tau : tau_list(config)) {
    const Trajectory traj = integrate_master_equation(l, schedule, tau, preset.initial_state, options);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const CMatrix &rho = traj.states[i];
      std::vector<std::string> r{number(tau), number(traj.times[i]),
                                 number(infidelity(preset.target_state, rho)),
                                 number(trace_distance(rho, preset.target_state))};
      for (int j = 0; j < d; ++j) r.push_back(number(rho(j, j).real()));
      t.add(std::move(r));
    }
  }
  json meta{{"model", preset.name}, {"gamma", gamma}, {"schedule", config.schedule}};
  return emit(config, "simulate", {{"trajectory", &t}}, meta);
}

Outputs cmd_compare(const RunConfig &config)
{
  Table t({"gamma", "infidelity", "tau_brachistochrone", "tau_linear", "gain", "status"});
  const ScanOptions scan = scan_options(config);
  for (double gamma : gamma_list(config)) {
    const ModelPreset preset = resolve(config, gamma);
    const Schedule optimal = brachistochrone(preset, config);
    const Schedule linear = preset.linear_schedule();
    auto curve = [&](const Schedule &s) {
      return cached(exact_infidelity_curve(preset.liouvillian(), s, preset.initial_state,
                                           target_for(preset, s, gamma, config.params.omega0)));
    };
    const InfidelityCurve a = curve(optimal);
    const InfidelityCurve b = curve(linear);
    for (double target : config.targets) {
      std::optional<double> ta, tb;
      try {
        ta = time_to_infidelity(a, target, scan);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kUnreachableInfidelity) throw;
      }
      try {
        tb = time_to_infidelity(b, target, scan);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kUnreachableInfidelity) throw;
      }
      const bool ok = ta && tb;
      t.add({number(gamma), number(target), ta ? number(*ta) : "nan", tb ? number(*tb) : "nan",
             ok ? number(*tb / *ta - 1.0) : "nan", ok ? "ok" : "unreachable"});
    }
  }
  json meta{{"model", config.model}, {"tau_min", config.tau_min}, {"tau_max", config.tau_max},
            {"points", config.scan_points}};
  return emit(config, "compare", {{"gain", &t}}, meta);
}

Outputs cmd_sweep(const RunConfig &config)
{
  Table t({"gamma", "tau", "infidelity_brachistochrone", "infidelity_linear",
           "trace_distance_brachistochrone", "trace_distance_linear"});
  std::vector<double> taus = config.taus;
  if (taus.empty()) {
    const double ratio = std::log(config.tau_max / config.tau_min);
    for (int i = 0; i < config.scan_points; ++i)
      taus.push_back(config.tau_min * std::exp(ratio * i / (config.scan_points - 1)));
  }
  for (double gamma : gamma_list(config)) {
    const ModelPreset preset = resolve(config, gamma);
    const Liouvillian l = preset.liouvillian();
    const Schedule optimal = brachistochrone(preset, config);
    const Schedule linear = preset.linear_schedule();
    const auto target_a = target_for(preset, optimal, gamma, config.params.omega0);
    const auto target_b = target_for(preset, linear, gamma, config.params.omega0);
    for (double tau : taus) {
      const CMatrix ra = propagate_to_end(l, optimal, tau, preset.initial_state);
      const CMatrix rb = propagate_to_end(l, linear, tau, preset.initial_state);
      const CMatrix fa = target_a(tau), fb = target_b(tau);
      t.add({number(gamma), number(tau), number(infidelity(fa, ra)), number(infidelity(fb, rb)),
             number(trace_distance(ra, fa)), number(trace_distance(rb, fb))});
    }
  }
  json meta{{"model", config.model}};
  return emit(config, "sweep", {{"curves", &t}}, meta);
}

void write_outputs(const RunConfig &config, const Outputs &outputs)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) throw Error(ErrorCode::kInvalidArgument, "cannot create " + config.out + ": " + ec.message());
  for (const auto &[name, text] : outputs) {
    const fs::path path = fs::path(config.out) / name;
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  }
}

}  // namespace qabos::cli
