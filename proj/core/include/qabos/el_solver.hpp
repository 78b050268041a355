// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "qabos/lagrangian.hpp"
#include "qabos/liouvillian.hpp"
#include "qabos/schedule.hpp"
#include "qabos/spectral.hpp"

namespace qabos
{

/// Dirichlet data in reduced coordinates: p(0) = start, p(1) = end.
struct Boundary
{
  RVector start;
  RVector end;
};

/// The Q·V problem in reduced coordinates p, with q = constraint(p).
///
/// V(p, p') = p'ᵀ M(p) p' with M = Jᵀ G J, where G is the drive metric of
/// the superoperator and J the constraint Jacobian. Q is evaluated from the
/// gap at q(p) and the running integral of Re 𝒢 carried along the trajectory.
class ElProblem
{
public:
  ElProblem(Liouvillian liouvillian, Constraint constraint, LagrangianConfig config,
            const Boundary &boundary, std::vector<double> reference_grid = uniform_grid(201));

  int size() const { return constraint_.reduced_size(); }
  const Liouvillian &liouvillian() const { return liouvillian_; }
  const Constraint &constraint() const { return constraint_; }
  const LagrangianConfig &config() const { return config_; }
  const Boundary &boundary() const { return boundary_; }
  bool exponential_dropped() const { return drop_; }
  /// True when M(p) is constant (affine model and constraint, or detected).
  bool constant_mass() const { return constant_mass_; }
  double vanish_tol() const { return gap_.vanish_tol(); }

  /// Constant multiplying Q (a gauge; must not change the solution).
  void set_q_scale(double scale);

  /// Restart gap continuation at the start of a trajectory.
  void reset();

  cplx gap(const RVector &p);
  /// 𝒢 and ∂𝒢/∂p from first-order eigenvalue perturbation; falls back to
  /// central differences when the eigenvector matrix is ill-conditioned.
  std::pair<cplx, CVector> gap_gradient(const RVector &p);
  double q_value(const RVector &p, double re_integral);
  RMatrix mass(const RVector &p) const;
  RVector q_gradient(const RVector &p, double re_integral);

  struct QSample
  {
    cplx gap;
    double q = 0.0;
    RVector gradient;
  };
  /// 𝒢, Q and ∂Q/∂p from one eigen-decomposition.
  QSample q_sample(const RVector &p, double re_integral);

private:
  Liouvillian liouvillian_;
  Constraint constraint_;
  LagrangianConfig config_;
  Boundary boundary_;
  GapFunction gap_;
  bool drop_ = false;
  bool constant_mass_ = false;
  RMatrix mass_;
  double q_scale_ = 1.0;
};

/// q'' from the Q/V Euler-Lagrange system at (p, p', ∫Re𝒢):
///   Σ_k Q M_nk·2 p''_k = ∂(QV)/∂p_n − Σ_k [∂Q/∂p_k ∂V/∂p'_n + Q ∂²V/∂p_k∂p'_n] p'_k
///                        − ∂Q/∂s ∂V/∂p'_n.
/// The last term is present only when the exponential factor is kept.
/// Throws kDegenerateDrive for a singular mass matrix and kSingularPath when
/// |𝒢| ≤ vanish_tol.
RVector assemble_el_rhs(ElProblem &problem, const RVector &p, const RVector &dp,
                        double re_integral);

struct SolverOptions
{
  int grid_points = 1001;
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Boundary miss relative to max(1, ‖p(1) − p(0)‖∞).
  double residual_tol = 1e-8;
  int max_iterations = 60;
  /// Default: the linear-ramp slope p(1) − p(0).
  std::optional<RVector> initial_slope;
  /// Solve the rate-free problem when Condition 1 holds on the linear ramp.
  bool use_condition1 = true;
  /// Multiplies Q; a gauge knob for testing.
  double q_scale = 1.0;
};

struct BVPSolution
{
  Schedule schedule;
  std::vector<double> grid;
  RMatrix values;
  RMatrix slopes;
  /// Relative boundary miss at s = 1.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool condition1_path = false;
};

/// Shooting: integrate the EL system from s = 0 with a trial slope (dopri5,
/// rtol/atol from `options`), correct the slope with the secant method (m = 1)
/// or damped Newton (m > 1) until p(1) matches. Throws kNonConvergence with
/// the best residual, kSingularPath if every trial crosses a gap collapse.
BVPSolution solve_bvp(const Liouvillian &liouvillian, const Constraint &constraint,
                      const Boundary &boundary, const LagrangianConfig &config = {},
                      const SolverOptions &options = {});

/// Ω_y(s) = Ω_0/2 − (Ω̃_0/2) tan((1−2s) arctan(Ω_0/Ω̃_0)), Ω̃_0² = |Ω_0² − 2γ²|,
/// on the constraint Ω_x + Ω_y = Ω_0 with p = Ω_y.
Schedule analytic_qubit_sum_constraint(double omega0, double gamma);

/// Ω_x = Ω_0 cos(πs/2), Ω_y = Ω_0 sin(πs/2) on the constant-power circle.
Schedule analytic_constant_power(double omega0);

}  // namespace qabos
