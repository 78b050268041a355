// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "qabos/liouvillian.hpp"
#include "qabos/schedule.hpp"
#include "qabos/spectral.hpp"

namespace qabos
{

struct LagrangianConfig
{
  /// Total evolution time in the exponential factor exp((1/τ)∫ Re 𝒢 ds).
  double tau = 1.0;
  /// Adiabaticity scale in the speed; a pure gauge for the optimization.
  double epsilon = 1.0;
  GapPolicy gap;
  /// Force exp(...) = 1. Also set automatically when |Re 𝒢| ≤ vanish_tol on the grid.
  bool drop_exponential = false;

  void validate() const;
};

/// Split L̃_os = Q·V with V = ‖𝕃'‖² and Q = [exp((1/τ)∫Re𝒢)/|𝒢|²]².
struct LagrangianValue
{
  double V = 0.0;
  double Q = 0.0;
  double L_os = 0.0;
  double L_tilde = 0.0;
  cplx gap{};
  double re_integral = 0.0;
};

/// Lagrangian quantities along one schedule. The gap curve and its running
/// integral ∫₀^s Re 𝒢 are computed once on `grid` (trapezoid) and reused.
class LagrangianEvaluator
{
public:
  LagrangianEvaluator(Liouvillian liouvillian, Schedule schedule, LagrangianConfig config,
                      std::vector<double> grid = uniform_grid(1001));

  const Liouvillian &liouvillian() const { return liouvillian_; }
  const Schedule &schedule() const { return schedule_; }
  const LagrangianConfig &config() const { return config_; }
  const GapCurve &gap_curve() const { return gap_; }
  bool exponential_dropped() const { return drop_; }

  /// 𝒢(s): exact on grid points, otherwise the pair nearest to the interpolated branches.
  cplx gap(double s) const;
  /// ∫₀^s Re 𝒢 dξ (trapezoid on the grid, linear inside a cell).
  double re_integral(double s) const;

  /// Throws kGapCollapse if |𝒢(s)| ≤ vanish_tol.
  LagrangianValue at(double s) const;

  /// v = ε|𝒢|²/‖𝕃'‖ · exp(−(1/τ)∫₀^s Re 𝒢). Throws kInfiniteSpeed if ‖𝕃'‖ = 0.
  double speed(double s) const;

  /// 𝒯 = ∫₀¹ ds / v by the trapezoid rule on the grid.
  double functional_time() const;

private:
  Liouvillian liouvillian_;
  Schedule schedule_;
  LagrangianConfig config_;
  SpectralBranches branches_;
  GapCurve gap_;
  std::vector<double> integral_;
  bool drop_ = false;
};

/// Convenience wrappers building a one-off evaluator.
double adiabatic_speed(const Liouvillian &liouvillian, const Schedule &schedule, double s,
                       const LagrangianConfig &config = {});
LagrangianValue lagrangian(const Liouvillian &liouvillian, const Schedule &schedule, double s,
                           const LagrangianConfig &config = {});
double functional_time(const Liouvillian &liouvillian, const Schedule &schedule,
                       const LagrangianConfig &config = {},
                       std::vector<double> grid = uniform_grid(1001));

/// Drive-space metric G_kn = Re tr(∂_k𝕃† ∂_n𝕃) at q, so that V = q'ᵀ G q'.
RMatrix drive_metric(const Liouvillian &liouvillian, const RVector &q);

/// Q = [exp(re_integral/τ)/|𝒢|²]² (exp factor skipped when `drop`).
double q_factor(cplx gap, double re_integral, double tau, bool drop);

struct Condition1Report
{
  bool rates_constant = true;
  bool gap_constant = false;
  bool gap_imaginary = false;
  /// rates_constant ∧ gap_constant ∧ gap_imaginary.
  bool holds = false;
  /// Mean of L_os(s)/L_cs(s) over the grid and its relative spread std/mean.
  double ratio = 0.0;
  double ratio_spread = 0.0;
  /// holds ∧ ratio_spread ≤ tol.
  bool equivalent = false;
};

/// Checks the sufficient condition for open/closed Lagrangian equivalence and,
/// when it holds, measures L_os/L_cs against the rate-free model.
Condition1Report check_condition1(const Liouvillian &liouvillian, const Schedule &schedule,
                                  const LagrangianConfig &config = {}, double tol = 1e-9,
                                  std::vector<double> grid = uniform_grid(1001));

}  // namespace qabos
