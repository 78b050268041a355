// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "qabos/dynamics.hpp"
#include "qabos/el_solver.hpp"
#include "qabos/lagrangian.hpp"
#include "qabos/models.hpp"
#include "qabos/spectral.hpp"

namespace
{

using namespace qabos;

ModelPreset dj_preset(int qubits)
{
  std::vector<int> table(std::size_t{1} << qubits, 0);
  for (std::size_t i = table.size() / 2; i < table.size(); ++i) table[i] = 1;
  return deutsch_jozsa(qubits, 1.0, 0.1, table);
}

void BM_SuperoperatorBuild(benchmark::State &state)
{
  const auto preset = dj_preset(static_cast<int>(state.range(0)));
  const Liouvillian l = preset.liouvillian();
  const RVector q = preset.linear_schedule().drives(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(l.at(q));
}
BENCHMARK(BM_SuperoperatorBuild)->Arg(1)->Arg(2)->Arg(3);

void BM_Eigenvalues(benchmark::State &state)
{
  const auto preset = dj_preset(static_cast<int>(state.range(0)));
  const CMatrix m = preset.liouvillian().at(preset.linear_schedule().drives(0.3));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_TrackBranches(benchmark::State &state)
{
  const auto preset = stirap_balanced(1.0, 0.1);
  const Liouvillian l = preset.liouvillian();
  const auto grid = uniform_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(track_branches(l, preset.linear_schedule(), grid));
}
BENCHMARK(BM_TrackBranches)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);

void BM_Lagrangian(benchmark::State &state)
{
  const auto preset = stirap_balanced(1.0, 0.1);
  const LagrangianEvaluator e(preset.liouvillian(), preset.linear_schedule(),
                              preset.lagrangian_config());
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.at(0.1 + 0.8 * s));
    s = s > 1.0 ? 0.0 : s + 1e-3;
  }
}
BENCHMARK(BM_Lagrangian)->Unit(benchmark::kMicrosecond);

void BM_SolveQubit(benchmark::State &state)
{
  const auto preset = qubit_dephasing(1.0, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bvp(preset.liouvillian(), preset.constraint, preset.boundary,
                                       preset.lagrangian_config()));
  }
}
BENCHMARK(BM_SolveQubit)->Unit(benchmark::kMillisecond);

void BM_SolveStirap(benchmark::State &state)
{
  const auto preset = stirap_balanced(1.0, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bvp(preset.liouvillian(), preset.constraint, preset.boundary,
                                       preset.lagrangian_config()));
  }
}
BENCHMARK(BM_SolveStirap)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State &state)
{
  const auto preset = stirap_balanced(1.0, 0.1);
  const Liouvillian l = preset.liouvillian();
  const double tau = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
      propagate_to_end(l, preset.linear_schedule(), tau, preset.initial_state));
  }
}
BENCHMARK(BM_Propagate)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_StirapAdiabatic(benchmark::State &state)
{
  const auto preset = stirap_balanced(1.0, 0.1);
  const StirapAdiabatic ad(0.1, 1.0, preset.linear_schedule());
  for (auto _ : state) benchmark::DoNotOptimize(ad.final_density(20.0));
}
BENCHMARK(BM_StirapAdiabatic)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
