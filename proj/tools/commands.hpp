// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "qabos/models.hpp"

namespace qabos::cli
{

enum class Format
{
  kCsv,
  kJson,
};

struct RunConfig
{
  std::string subcommand;
  std::string model = "qubit-dephasing";
  std::string model_file;
  PresetParams params;
  std::vector<double> gammas;
  std::string truth_table;
  std::vector<double> start;
  std::vector<double> end;
  int grid = 1001;
  std::vector<double> taus;
  std::string schedule = "brachistochrone";
  std::string form = "auto";
  std::vector<double> targets{1e-2, 3e-3, 1e-3};
  double tau_min = 1.0;
  double tau_max = 200.0;
  int scan_points = 240;
  std::string out = ".";
  Format format = Format::kCsv;
  int threads = 1;
};

/// Throws Error(kInvalidArgument) on the first violated invariant.
void validate(const RunConfig &config);

/// Named output documents; nothing is written by the commands themselves.
using Outputs = std::map<std::string, std::string>;

Outputs cmd_spectrum(const RunConfig &config);
Outputs cmd_solve(const RunConfig &config);
Outputs cmd_simulate(const RunConfig &config);
Outputs cmd_compare(const RunConfig &config);
Outputs cmd_sweep(const RunConfig &config);

/// Writes every document under config.out, creating the directory.
void write_outputs(const RunConfig &config, const Outputs &outputs);

}  // namespace qabos::cli
