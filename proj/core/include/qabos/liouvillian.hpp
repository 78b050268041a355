// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qabos/schedule.hpp"
#include "qabos/types.hpp"

namespace qabos
{

// ---------------------------------------------------------------------------
// Operator bases
// ---------------------------------------------------------------------------

/// Traceless, Hilbert-Schmidt orthogonal operators σ_1..σ_{D²-1} with
/// tr(σ_n σ_m†) = norm_const·δ_nm. The identity σ_0 is implicit.
class OperatorBasis
{
public:
  OperatorBasis(int dimension, double norm_const, std::vector<CMatrix> elements);

  int dimension() const { return dimension_; }
  double norm_const() const { return norm_const_; }
  /// Number of traceless elements, D² - 1.
  int size() const { return static_cast<int>(elements_.size()); }
  const CMatrix &element(int n) const { return elements_.at(static_cast<std::size_t>(n)); }
  const std::vector<CMatrix> &elements() const { return elements_; }

  /// Row n holds conj(vec(σ_n)) so that (conj_rows * vec(X))_n = tr(σ_n† X).
  const CMatrix &conjugate_rows() const { return conj_rows_; }

  /// Largest deviation from the trace/orthogonality invariants.
  double invariant_error() const;

private:
  int dimension_;
  double norm_const_;
  std::vector<CMatrix> elements_;
  CMatrix conj_rows_;
};

/// Default basis for dimension D, scaled so that tr(σ_n σ_n†) = norm_const.
///
///   D = 2   Pauli (σ_x, σ_y, σ_z).
///   D = 3   The three-level table: diag(1,0,-1), diag(1,-2,1)/√3, then the
///           real symmetric/antisymmetric pairs (01), (02), (12).
///   D ≥ 4   Hermitian generalized Gell-Mann: for each j < k the symmetric
///           then antisymmetric element, followed by the D-1 diagonal ones.
OperatorBasis make_basis(int dimension, double norm_const = 2.0);

/// Hermitian generalized Gell-Mann basis for any D ≥ 2 (the D ≥ 4 branch of
/// make_basis, also usable for D = 3).
OperatorBasis gell_mann_basis(int dimension, double norm_const = 2.0);

/// {1, σ_x, σ_y, σ_z}^{⊗N} without the global identity; norm_const = 2^N.
/// Element order is lexicographic in the per-qubit index with qubit 0 most
/// significant, skipping the all-identity word.
OperatorBasis pauli_product_basis(int qubits);

// ---------------------------------------------------------------------------
// Lindblad models
// ---------------------------------------------------------------------------

struct Dissipator
{
  CMatrix jump;
  double rate = 0.0;
};

/// H(q) plus jump operators with constant rates:
///   L[ρ] = -i[H(q), ρ] + Σ_k γ_k (L_k ρ L_k† - ½{L_k† L_k, ρ}).
class LindbladModel
{
public:
  using HamiltonianFn = std::function<CMatrix(const RVector &)>;
  using HamiltonianDerivativeFn = std::function<CMatrix(const RVector &, int)>;

  /// H(q) = H_0 + Σ_k q_k H_k.
  static LindbladModel affine(OperatorBasis basis, CMatrix constant_term,
                              std::vector<CMatrix> drive_terms,
                              std::vector<Dissipator> dissipators);

  /// H(q) given by an arbitrary callback with `drive_arity` inputs.
  /// `derivative(q, k)` = ∂H/∂q_k is optional; central differences otherwise.
  static LindbladModel general(OperatorBasis basis, int drive_arity, HamiltonianFn hamiltonian,
                               std::vector<Dissipator> dissipators,
                               HamiltonianDerivativeFn derivative = {});

  int dimension() const { return basis_->dimension(); }
  int drive_arity() const { return drive_arity_; }
  bool is_affine() const { return affine_; }
  const OperatorBasis &basis() const { return *basis_; }
  const std::vector<Dissipator> &dissipators() const { return dissipators_; }

  CMatrix hamiltonian(const RVector &q) const;
  /// True when ∂H/∂q is exact (affine, or a derivative callback was given).
  bool has_exact_derivative() const { return affine_ || static_cast<bool>(derivative_); }
  /// ∂H/∂q_k at q.
  CMatrix hamiltonian_derivative(const RVector &q, int k) const;
  /// Constant term H_0 (affine models only).
  const CMatrix &constant_term() const;
  /// Drive term H_k (affine models only).
  const CMatrix &drive_term(int k) const;

  /// Same Hamiltonian, no dissipators.
  LindbladModel closed() const;
  /// Same model with every rate multiplied by `factor`.
  LindbladModel with_rates_scaled(double factor) const;

  /// Checks rates ≥ 0 and Hermiticity of H at the supplied drive samples.
  void validate(const std::vector<RVector> &samples) const;

private:
  LindbladModel() = default;

  std::shared_ptr<const OperatorBasis> basis_;
  int drive_arity_ = 0;
  bool affine_ = false;
  CMatrix constant_;
  std::vector<CMatrix> drive_terms_;
  HamiltonianFn hamiltonian_;
  HamiltonianDerivativeFn derivative_;
  std::vector<Dissipator> dissipators_;
};

/// -i[H(q), ρ] + dissipator terms, on any square matrix of side D.
CMatrix apply_generator(const LindbladModel &model, const RVector &q, const CMatrix &rho);

/// Dissipative part only (no Hamiltonian).
CMatrix apply_dissipator(const LindbladModel &model, const CMatrix &rho);

// ---------------------------------------------------------------------------
// Coherence vectors
// ---------------------------------------------------------------------------

/// ρ = identity·𝟙/D + (1/d) Σ_n components_n σ_n, with components_n = tr(ρ σ_n†)
/// and identity = tr ρ (canonically 1).
struct CoherenceVector
{
  cplx identity{1.0, 0.0};
  CVector components;

  /// (identity, components...) of length D².
  CVector full() const;
  const CVector &reduced() const { return components; }
  static CoherenceVector from_full(const CVector &full);
};

/// Checked vectorization: ρ must be Hermitian with unit trace (1e-10).
CoherenceVector vectorize(const CMatrix &rho, const OperatorBasis &basis);
/// Expansion coefficients of an arbitrary operator (no state checks).
CoherenceVector expand(const CMatrix &op, const OperatorBasis &basis);
CMatrix devectorize(const CoherenceVector &v, const OperatorBasis &basis);

// ---------------------------------------------------------------------------
// Superoperators
// ---------------------------------------------------------------------------

enum class SuperoperatorForm
{
  kFull,             ///< D² side, identity row/column included.
  kReduced,          ///< D²-1 side; throws kNonUnital if L[𝟙] ≠ 0.
  kReducedIfUnital,  ///< Reduced when L[𝟙] = 0, full otherwise.
};

/// Matrix of L in the coherence-vector coordinates:
///   𝕃_kl = (1/d) tr(σ_k† L[σ_l]) for l ≥ 1, 𝕃_k0 = (1/D) tr(σ_k† L[𝟙]).
struct Superoperator
{
  CMatrix matrix;
  double s = 0.0;
  bool reduced = false;
};

/// Superoperator builder bound to one model. Affine models precompute the
/// per-drive matrices so that 𝕃(q) costs one weighted sum.
class Liouvillian
{
public:
  explicit Liouvillian(LindbladModel model,
                       SuperoperatorForm form = SuperoperatorForm::kReducedIfUnital);

  const LindbladModel &model() const { return model_; }
  bool reduced() const { return reduced_; }
  bool unital() const { return unital_; }
  int side() const;

  /// 𝕃(q).
  CMatrix at(const RVector &q) const;
  /// ∂𝕃/∂q_k at q (exact for affine models, central difference otherwise).
  CMatrix drive_derivative(const RVector &q, int k) const;
  /// Hamiltonian-only part of the superoperator.
  CMatrix hamiltonian_part(const RVector &q) const;

private:
  CMatrix superoperator_of(const std::function<CMatrix(const CMatrix &)> &map,
                           bool include_identity_column) const;

  LindbladModel model_;
  bool reduced_ = false;
  bool unital_ = true;
  CMatrix dissipator_part_;
  CMatrix constant_part_;
  std::vector<CMatrix> drive_parts_;
};

/// 𝓛[𝟙] ≈ 0 to within 1e-12 relative to the model scale.
bool is_unital(const LindbladModel &model, const RVector &q);

Superoperator build_superoperator(const LindbladModel &model, const RVector &q,
                                  SuperoperatorForm form = SuperoperatorForm::kReducedIfUnital);

/// Finite-difference step in s used for non-affine models.
inline constexpr double kSuperoperatorStep = 1e-6;

/// d𝕃/ds along the schedule. Affine models with constant rates use
/// Σ_k q'_k ∂𝕃/∂q_k (rates drop out); other models use a central difference
/// with step kSuperoperatorStep (one-sided within that distance of 0 or 1).
Superoperator superoperator_derivative(const Liouvillian &liouvillian, const Schedule &schedule,
                                       double s);
Superoperator superoperator_derivative(const LindbladModel &model, const Schedule &schedule,
                                       double s,
                                       SuperoperatorForm form = SuperoperatorForm::kReducedIfUnital);

/// Frobenius norm squared, tr(A†A).
double hs_norm2(const CMatrix &a);

}  // namespace qabos
