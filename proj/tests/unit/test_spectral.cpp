// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qabos/models.hpp"
#include "qabos/spectral.hpp"

namespace qabos
{
namespace
{

namespace ot = qabos::testing;

TEST(Eigenvalues, QubitClosedForm)
{
  const auto preset = qubit_dephasing(1.0, 0.25);
  const Liouvillian l(preset.model, SuperoperatorForm::kFull);
  for (double s : {0.0, 0.3, 0.8}) {
    const RVector q = preset.linear_schedule().drives(s);
    EXPECT_LT(ot::multiset_distance(eigenvalues(l.at(q)), ot::qubit_spectrum(q(0), q(1), 0.25)),
              1e-12);
  }
}

TEST(Eigenvalues, SortLexicographic)
{
  CVector v(4);
  v << cplx(0, 1), cplx(-1, 2), cplx(0, -1), cplx(-1, -3);
  sort_lexicographic(v);
  EXPECT_EQ(v(0), cplx(-1, -3));
  EXPECT_EQ(v(1), cplx(-1, 2));
  EXPECT_EQ(v(2), cplx(0, -1));
  EXPECT_EQ(v(3), cplx(0, 1));
}

TEST(Branches, FollowCrossingCurves)
{
  // Two real branches crossing at s = 1/2 keep their identities.
  const auto grid = uniform_grid(21);
  std::vector<CVector> points;
  for (double s : grid) {
    CVector v(2);
    v << cplx(s, 0.1), cplx(1.0 - s, -0.1);
    points.push_back(v);
  }
  const SpectralBranches b = match_branches(grid, points, 1e-12);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(std::abs(b.values(row, 0) - b.values(0, 0)) + std::abs(b.values(row, 1) - b.values(0, 1)),
                2.0 * grid[i], 1e-12);
  }
}

TEST(Branches, MultiplicityOfDegenerateStirapPairs)
{
  const auto preset = stirap_balanced(1.0, 0.2);
  const SpectralBranches b =
    track_branches(preset.liouvillian(), preset.linear_schedule(), uniform_grid(51));
  EXPECT_EQ(b.size(), 8);
  int doubles = 0;
  for (int m : b.multiplicity) doubles += (m == 2);
  EXPECT_EQ(doubles, 6);  // λ₀ and λ₁^± are twofold.
}

TEST(Gap, SelectorPicksOuterPairForQubit)
{
  const auto preset = qubit_dephasing(1.0, 0.2);
  const Liouvillian l = preset.liouvillian();
  GapFunction gap(l, preset.gap, preset.linear_schedule(), uniform_grid(101));
  for (double s : {0.0, 0.5, 1.0}) {
    const RVector q = preset.linear_schedule().drives(s);
    const double delta = std::sqrt(q.squaredNorm() - 0.04);
    EXPECT_NEAR(std::abs(gap(q)), 2.0 * delta, 1e-12);
  }
}

TEST(Gap, AutomaticPolicyFindsNonVanishingPair)
{
  const auto preset = qubit_dephasing(1.0, 0.2);
  const SpectralBranches b =
    track_branches(preset.liouvillian(), preset.linear_schedule(), uniform_grid(101));
  const GapCurve gap = min_nonvanishing_gap(b, GapPolicy::automatic());
  for (Eigen::Index i = 0; i < gap.values.size(); ++i)
    EXPECT_GT(std::abs(gap.values(i)), gap.vanish_tol);
  EXPECT_GE(gap.values(0).imag(), 0.0);
}

TEST(Gap, ExplicitPairOutOfRangeThrows)
{
  const auto preset = qubit_dephasing(1.0, 0.2);
  const SpectralBranches b =
    track_branches(preset.liouvillian(), preset.linear_schedule(), uniform_grid(11));
  EXPECT_THROW(min_nonvanishing_gap(b, GapPolicy::explicit_pair(0, 9)), Error);
}

TEST(Gap, IdenticalBranchesHaveNoValidGap)
{
  const auto grid = uniform_grid(11);
  std::vector<CVector> points(grid.size(), CVector::Zero(2));
  const SpectralBranches b = match_branches(grid, points, 1e-12);
  EXPECT_THROW(min_nonvanishing_gap(b, GapPolicy::automatic(1e-9)), Error);
}

TEST(Jordan, DetectsDefectiveBlock)
{
  CMatrix j(2, 2);
  j << 1.0, 1.0, 0.0, 1.0;
  EXPECT_TRUE(detect_jordan(j).defective);
  EXPECT_FALSE(detect_jordan(CMatrix::Identity(3, 3)).defective);
}

}  // namespace
}  // namespace qabos
