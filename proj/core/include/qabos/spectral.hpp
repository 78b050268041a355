// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qabos/liouvillian.hpp"
#include "qabos/schedule.hpp"

namespace qabos
{

/// Eigenvalues of a general complex matrix. Throws kNumerical if the solver
/// fails or the eigenvalue sum misses the trace by more than 1e-9·max(1, ‖M‖).
CVector eigenvalues(const CMatrix &matrix);
CVector eigenvalues(const Superoperator &superop);

/// Sort key used for deterministic comparisons: lexicographic in (Re, Im).
void sort_lexicographic(CVector &values);

/// Eigenvalue curves λ_α(s) over a grid. Row i of `values` holds every branch
/// at grid[i]; column α is one continuous branch.
struct SpectralBranches
{
  std::vector<double> grid;
  CMatrix values;
  /// Number of branches (this one included) coinciding with α on the whole grid.
  std::vector<int> multiplicity;
  /// max_s ‖𝕃(s)‖ over the grid (0 when built from raw eigenvalues).
  double scale = 0.0;

  int size() const { return static_cast<int>(values.cols()); }
  CVector branch(int alpha) const { return values.col(alpha); }
};

struct TrackOptions
{
  /// Two assignments closer than this count as ambiguous. ≤ 0 selects
  /// 1e-9·max_s ‖𝕃(s)‖.
  double vanish_tol = 0.0;
  /// Worker threads for the per-point diagonalizations.
  int threads = 1;
};

/// Continuity matching of per-point eigenvalue lists: step i → i+1 uses the
/// minimum-cost perfect matching on |λ_a(s_i) − λ_b(s_{i+1})|². The first
/// point is ordered lexicographically. Throws kResolution when a swap of two
/// non-degenerate branches costs less than vanish_tol·(separation).
SpectralBranches match_branches(const std::vector<double> &grid,
                                const std::vector<CVector> &per_point, double vanish_tol);

/// Diagonalizes 𝕃(q(s)) on `grid` and matches the branches.
SpectralBranches track_branches(const Liouvillian &liouvillian, const Schedule &schedule,
                                const std::vector<double> &grid, const TrackOptions &options = {});

/// Picks (α, β) from one eigenvalue list; the gap is values[α] − values[β].
using GapSelector = std::function<std::pair<int, int>(const CVector &values)>;

/// α = eigenvalue with the largest imaginary part, β = the eigenvalue nearest
/// to conj(λ_α) among the rest.
GapSelector conjugate_pair_selector();

enum class GapMode
{
  kAutomatic,
  kExplicit,
  kSelector,
};

struct GapPolicy
{
  GapMode mode = GapMode::kAutomatic;
  /// ≤ 0 selects 1e-9·max_s ‖𝕃(s)‖.
  double vanish_tol = 0.0;
  /// Branch indices for kExplicit.
  int alpha = 0;
  int beta = 1;
  /// Pointwise rule for kSelector.
  GapSelector selector;

  static GapPolicy automatic(double tol = 0.0) { return GapPolicy{}.with_tol(tol); }
  static GapPolicy explicit_pair(int a, int b, double tol = 0.0);
  static GapPolicy from_selector(GapSelector s, double tol = 0.0);
  GapPolicy with_tol(double tol) const;
};

/// 𝒢(s) = λ_α(s) − λ_β(s) on the branch grid.
struct GapCurve
{
  std::vector<double> grid;
  CVector values;
  /// Branch pair; −1 for selector mode, where the pair may change with s.
  int alpha = -1;
  int beta = -1;
  double vanish_tol = 0.0;
};

/// Automatic: among pairs whose modulus exceeds vanish_tol on the whole grid,
/// the one with the smallest min_s |𝒢_αβ(s)|; ties go to the larger |Re 𝒢|.
/// The pair is oriented so that Im 𝒢 ≥ 0 at the first grid point.
/// Throws kNoValidGap if no pair qualifies (or the chosen gap vanishes).
GapCurve min_nonvanishing_gap(const SpectralBranches &branches, const GapPolicy &policy);

/// Effective vanish_tol for a policy given a spectral scale max‖𝕃‖.
double resolve_vanish_tol(double requested, double scale);

struct JordanReport
{
  /// 2-norm condition number of the unit-column eigenvector matrix.
  double condition = 1.0;
  bool defective = false;
};

/// Flags near-defective spectra: condition > 1/tol.
JordanReport detect_jordan(const CMatrix &matrix, double tol = 1e-6);
JordanReport detect_jordan(const Superoperator &superop, double tol = 1e-6);

/// Pointwise gap 𝒢(q) for drive vectors visited along a trajectory.
///
/// Selector mode is stateless. Explicit and automatic modes fix the pair on a
/// reference schedule, then follow it by nearest-eigenvalue continuation from
/// the reference start, so the first call after reset() must be near q(0).
class GapFunction
{
public:
  GapFunction(Liouvillian liouvillian, const GapPolicy &policy, const Schedule &reference,
              const std::vector<double> &grid);

  cplx operator()(const RVector &q);
  /// Pair (α, β) within `values` = eigenvalues of 𝕃(q); advances the
  /// continuation state like operator().
  std::pair<int, int> select(const CVector &values);
  void reset();
  double vanish_tol() const { return vanish_tol_; }
  const Liouvillian &liouvillian() const { return liouvillian_; }

private:
  Liouvillian liouvillian_;
  GapSelector selector_;
  double vanish_tol_ = 0.0;
  cplx seed_a_{}, seed_b_{};
  cplx last_a_{}, last_b_{};
};

}  // namespace qabos
