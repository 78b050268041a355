// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qabos/liouvillian.hpp"
#include "qabos/schedule.hpp"

namespace qabos
{

// ---------------------------------------------------------------------------
// Master-equation propagation
// ---------------------------------------------------------------------------

struct PropagationOptions
{
  double rtol = 1e-9;
  double atol = 1e-11;
  /// Output points on s ∈ [0, 1] (including both ends).
  int points = 101;
  /// Validity tolerances for stored states.
  double trace_tol = 1e-8;
  double positivity_tol = 1e-8;
  /// Upper bound on internal steps between two output points.
  int max_steps = 500000;
};

struct Trajectory
{
  /// Normalized times s; physical time is s·tau.
  std::vector<double> times;
  std::vector<CMatrix> states;
  double tau = 0.0;
};

/// Integrates d|ρ⟩⟩/ds = τ 𝕃(q(s)) |ρ⟩⟩ in coherence-vector form (dopri5).
/// Throws kStateValidity if a stored state loses unit trace or positivity
/// beyond the tolerances and kStiffness if the step size collapses.
Trajectory integrate_master_equation(const Liouvillian &liouvillian, const Schedule &schedule,
                                     double tau, const CMatrix &rho0,
                                     const PropagationOptions &options = {});

/// Final state only (same integrator, two output points).
CMatrix propagate_to_end(const Liouvillian &liouvillian, const Schedule &schedule, double tau,
                         const CMatrix &rho0, const PropagationOptions &options = {});

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// 1 − tr √(√ρ_f ρ √ρ_f). Eigenvalues below −1e-10 raise kStateValidity;
/// those in [−1e-10, 0) are clamped to 0.
double infidelity(const CMatrix &rho_f, const CMatrix &rho);

/// ½ Σ singular values of ρ₁ − ρ₂.
double trace_distance(const CMatrix &rho1, const CMatrix &rho2);

/// Hermitian square root with the same clamping rule as infidelity().
CMatrix psd_sqrt(const CMatrix &rho);

// ---------------------------------------------------------------------------
// Time to a target infidelity and relative gain
// ---------------------------------------------------------------------------

/// 𝓘 as a function of the total time τ.
using InfidelityCurve = std::function<double(double tau)>;

struct ScanOptions
{
  double tau_min = 1.0;
  double tau_max = 200.0;
  int points = 240;
  /// Bisection stops when the bracket is below rel_tol·τ.
  double rel_tol = 1e-3;
  int threads = 1;
};

/// Samples 𝓘(τ) on a log grid, takes the first crossing 𝓘 ≤ target and
/// bisects it. Returns tau_min if the first sample already qualifies.
/// Throws kUnreachableInfidelity if no sample reaches the target.
double time_to_infidelity(const InfidelityCurve &curve, double target,
                          const ScanOptions &options = {});

/// τ samples of a curve on the scan grid (useful for plotting).
std::vector<std::pair<double, double>> sample_infidelity(const InfidelityCurve &curve,
                                                         const ScanOptions &options = {});

/// G = τ_B/τ_A − 1 with A the candidate and B the baseline.
double gain(const InfidelityCurve &candidate, const InfidelityCurve &baseline, double target,
            const ScanOptions &options = {});

/// 𝓘(τ) between target(τ) and the exactly propagated final state.
InfidelityCurve exact_infidelity_curve(Liouvillian liouvillian, Schedule schedule, CMatrix rho0,
                                       std::function<CMatrix(double tau)> target,
                                       PropagationOptions options = {});

// ---------------------------------------------------------------------------
// Closed-form adiabatic solution for balanced loss-gain STIRAP
// ---------------------------------------------------------------------------

/// Three-channel adiabatic solution |ρ_ad(s)⟩⟩ = Σ_n c_n e^{τΛ_n(s) − Θ_n(s)} |𝒟_n(s)⟩⟩
/// for the Ξ system with drives (Ω_p, Ω_s) = Ω_0 (f_p, f_s), starting in |0⟩.
///
/// Channel index: 0 → λ₀ = −3Γ/2, 1 → λ₋ = −2Γ − R, 2 → λ₊ = −2Γ + R with
/// R = √(Γ² − 4Ω_0² f₊), f₊ = f_p² + f_s², f₋ = f_p² − f_s². Λ_n = ∫λ_n ds and
/// Θ_n = ∫ϑ_n ds with ϑ_n = ⟨⟨ℰ_n|𝒟_n'⟩⟩ (biorthonormal left vectors).
class StirapAdiabatic
{
public:
  /// `schedule` must map to drives (Ω_p, Ω_s) with Ω_p(0) = 0, Ω_s(0) = Ω_0.
  /// Throws kSingularConstant if 16Ω_0² = 3Γ², Γ² = 4Ω_0² or Γ = 0.
  StirapAdiabatic(double gamma, double omega0, Schedule schedule);

  double gamma() const { return gamma_; }
  double omega0() const { return omega0_; }
  const Schedule &schedule() const { return schedule_; }

  /// (f_p, f_s) at s.
  std::array<double, 2> fractions(double s) const;
  cplx eigenvalue(int channel, double s) const;
  /// 8-component right eigenvector in the closed-form normalization.
  CVector eigenvector(int channel, double s) const;
  /// ϑ_n(s) (needs the schedule rate).
  cplx phase_rate(int channel, double s) const;
  /// c_n from the closed forms.
  cplx constant(int channel) const;

  /// Λ_n(s) and Θ_n(s) by adaptive Gauss-Kronrod quadrature.
  cplx lambda_integral(int channel, double s) const;
  cplx phase_integral(int channel, double s) const;

  /// |ρ_ad(s)⟩⟩ (8 components) and the density matrix for total time τ.
  CVector coherence(double s, double tau) const;
  CMatrix density(double s, double tau) const;

  /// Endpoint state for many τ, reusing the s = 1 integrals.
  CMatrix final_density(double tau) const;

private:
  double gamma_;
  double omega0_;
  Schedule schedule_;
  std::array<cplx, 3> lambda_end_{};
  std::array<cplx, 3> theta_end_{};
};

}  // namespace qabos
