// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace
{

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

int threads_from_env()
{
  const char *v = std::getenv("QABOS_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char *end = nullptr;
  const long n = std::strtol(v, &end, 10);
  return (*end == '\0' && n > 0) ? static_cast<int>(n) : -1;
}

void add_common(CLI::App *sub, qabos::cli::RunConfig &c)
{
  auto *model = sub->add_option("--model", c.model, "Preset name")->capture_default_str();
  auto *file = sub->add_option("--model-file", c.model_file, "JSON model description");
  model->excludes(file);
  sub->add_option("--omega0", c.params.omega0, "Drive amplitude Ω0")->capture_default_str();
  sub->add_option("--gamma", c.gammas, "Decoherence rate(s), comma separated")->delimiter(',');
  sub->add_option("--qubits", c.params.qubits, "Deutsch-Jozsa qubit count")->capture_default_str();
  sub->add_option("--truth-table", c.truth_table, "Deutsch-Jozsa truth table, e.g. 0110");
  sub->add_option("--relaxation", c.params.relaxation, "Transmon adjacent-level relaxation rate");
  sub->add_option("--dephasing", c.params.dephasing, "Transmon dephasing rate on |1>, |2>");
  sub->add_option("--start", c.start, "Initial drives for --model-file")->delimiter(',');
  sub->add_option("--end", c.end, "Final drives for --model-file")->delimiter(',');
  sub->add_option("--grid", c.grid, "Grid points on s (odd, >= 11)")->capture_default_str();
  sub->add_option("--tau", c.taus, "Total time(s), comma separated")->delimiter(',');
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--format", c.format, "Output format")
    ->transform(CLI::CheckedTransformer(
      std::map<std::string, qabos::cli::Format>{{"csv", qabos::cli::Format::kCsv},
                                                {"json", qabos::cli::Format::kJson}}))
    ->capture_default_str();
}

void add_scan(CLI::App *sub, qabos::cli::RunConfig &c)
{
  sub->add_option("--target", c.targets, "Target infidelities")->delimiter(',');
  sub->add_option("--tau-min", c.tau_min, "Smallest scanned τ")->capture_default_str();
  sub->add_option("--tau-max", c.tau_max, "Largest scanned τ")->capture_default_str();
  sub->add_option("--points", c.scan_points, "Log-spaced τ samples")->capture_default_str();
}

}  // namespace

int main(int argc, char **argv)
{
  using namespace qabos::cli;
  CLI::App app{"Open-system adiabatic brachistochrones"};
  app.require_subcommand(1);
  RunConfig config;

  auto *spectrum = app.add_subcommand("spectrum", "Eigenvalue branches and gap along the linear ramp");
  auto *solve = app.add_subcommand("solve", "Solve the Euler-Lagrange boundary-value problem");
  auto *simulate = app.add_subcommand("simulate", "Propagate the master equation along a schedule");
  auto *compare = app.add_subcommand("compare", "Time-to-infidelity gain of the brachistochrone");
  auto *sweep = app.add_subcommand("sweep", "Final-state metrics over τ for both schedules");
  for (auto *sub : {spectrum, solve, simulate, compare, sweep}) add_common(sub, config);
  simulate->add_option("--schedule", config.schedule, "linear or brachistochrone")
    ->capture_default_str();
  spectrum
    ->add_option("--form", config.form,
                 "auto (full for a qubit, reduced when unital otherwise), full or reduced")
    ->check(CLI::IsMember({"auto", "full", "reduced"}))
    ->capture_default_str();
  add_scan(compare, config);
  add_scan(sweep, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  config.subcommand = app.get_subcommands().front()->get_name();

  try {
    config.threads = threads_from_env();
    validate(config);
    Outputs outputs;
    if (config.subcommand == "spectrum") outputs = cmd_spectrum(config);
    else if (config.subcommand == "solve") outputs = cmd_solve(config);
    else if (config.subcommand == "simulate") outputs = cmd_simulate(config);
    else if (config.subcommand == "compare") outputs = cmd_compare(config);
    else outputs = cmd_sweep(config);
    write_outputs(config, outputs);
    for (const auto &entry : outputs) std::printf("wrote %s/%s\n", config.out.c_str(), entry.first.c_str());
  } catch (const qabos::Error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return qabos::is_input_error(e.code()) ? kExitInput : kExitNumerical;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
