// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qabos/el_solver.hpp"
#include "qabos/lagrangian.hpp"
#include "qabos/liouvillian.hpp"
#include "qabos/schedule.hpp"
#include "qabos/spectral.hpp"

namespace qabos
{

/// Closed-form references available for a preset.
struct PresetCapabilities
{
  bool spectrum = false;
  bool lagrangian = false;
  bool brachistochrone = false;
  bool adiabatic_state = false;
};

/// A model with its default constraint, Dirichlet data, gap choice and
/// initial/target states. Immutable after construction.
struct ModelPreset
{
  std::string name;
  LindbladModel model;
  Constraint constraint;
  Boundary boundary;
  GapPolicy gap;
  CMatrix initial_state;
  CMatrix target_state;
  PresetCapabilities capabilities;
  std::vector<std::string> warnings;

  Liouvillian liouvillian() const { return Liouvillian(model); }
  Schedule linear_schedule() const { return Schedule::linear(constraint, boundary.start, boundary.end); }
  LagrangianConfig lagrangian_config(double tau = 1.0) const;
};

/// Same preset with another constraint and boundary.
ModelPreset with_constraint(ModelPreset preset, Constraint constraint, Boundary boundary);

/// H = ½(Ω_x σ_x + Ω_y σ_y), dephasing γ(σ_z•σ_z − •). Drives (Ω_x, Ω_y).
/// Default constraint Ω_x + Ω_y = Ω_0 with p = Ω_y: 0 → Ω_0.
ModelPreset qubit_dephasing(double omega0, double gamma);

/// Same model on the circle Ω_x² + Ω_y² = Ω_0² with p = angle: 0 → π/2.
ModelPreset qubit_dephasing_constant_power(double omega0, double gamma);

/// Ξ system H = Ω_p|0⟩⟨1| + Ω_s|1⟩⟨2| + h.c. with balanced loss and gain
/// Γ on both transitions. Drives (Ω_p, Ω_s). Default constraint
/// Ω_p + Ω_s = Ω_0 with p = Ω_s: Ω_0 → 0.
ModelPreset stirap_balanced(double omega0, double gamma);

/// Same model on Ω_p² + Ω_s² = Ω_0² with p = angle: π/2 → 0.
ModelPreset stirap_balanced_constant_power(double omega0, double gamma);

enum class PromiseCheck
{
  kStrict,
  kWarn,
};

/// Adiabatic Deutsch-Jozsa on N qubits: H(r) = U H(0) U†, U = exp(iπ r 𝒪/2),
/// H(0) = −ω Σσ_x, 𝒪 = diag((−1)^f(j)), dephasing γ per qubit.
/// `truth_table` has 2^N entries in {0, 1}; single drive r: 0 → 1.
ModelPreset deutsch_jozsa(int qubits, double omega, double gamma,
                          const std::vector<int> &truth_table,
                          PromiseCheck promise = PromiseCheck::kStrict);

/// Oracle diagonal (−1)^f(j).
RVector deutsch_jozsa_oracle(const std::vector<int> &truth_table);

/// Transmon qutrit: STIRAP Hamiltonian with Ω_p = Ω_0 q₁, Ω_s = Ω_0 q₂,
/// relaxation Γ_kj |k⟩⟨j| (k ≠ j, Γ symmetric) and dephasing γ_j |j⟩⟨j|.
/// Default constraint q₁ + q₂ = 1 with p = q₂: 0 → 1, from |2⟩ to |0⟩.
ModelPreset transmon_qutrit(double omega0, const RMatrix &relaxation, const RVector &dephasing);

/// Preset names accepted by make_preset().
std::vector<std::string> preset_names();

/// Parameters for make_preset(); unused fields are ignored.
struct PresetParams
{
  double omega0 = 1.0;
  double gamma = 0.0;
  int qubits = 2;
  std::vector<int> truth_table;
  PromiseCheck promise = PromiseCheck::kStrict;
  double relaxation = 0.0;
  double dephasing = 0.0;
};

/// Builds a preset by name (see preset_names()). Throws kInvalidArgument
/// for an unknown name.
ModelPreset make_preset(const std::string &name, const PresetParams &params);

}  // namespace qabos
