// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "qabos/schedule.hpp"

namespace qabos
{
namespace
{

TEST(Constraint, SumMapsToDrives)
{
  const Constraint c = sum_constraint(2.0);
  RVector p(1);
  p << 0.5;
  const RVector q = c.apply(p);
  EXPECT_DOUBLE_EQ(q(0), 1.5);
  EXPECT_DOUBLE_EQ(q(1), 0.5);
  EXPECT_TRUE(c.is_affine());
}

TEST(Constraint, ConstantPowerJacobian)
{
  const Constraint c = constant_power_constraint(1.5);
  RVector p(1);
  p << 0.3;
  const RMatrix j = c.jacobian(p);
  EXPECT_NEAR(j(0, 0), -1.5 * std::sin(0.3), 1e-14);
  EXPECT_NEAR(j(1, 0), 1.5 * std::cos(0.3), 1e-14);
  EXPECT_FALSE(c.is_affine());
}

TEST(Constraint, GeneralWithoutJacobianUsesDifferences)
{
  const Constraint c = Constraint::general(1, 1, [](const RVector &p) -> RVector {
    RVector q(1);
    q << p(0) * p(0);
    return q;
  });
  RVector p(1);
  p << 0.7;
  EXPECT_NEAR(c.jacobian(p)(0, 0), 1.4, 1e-7);
}

TEST(Schedule, LinearRates)
{
  RVector a(1), b(1);
  a << 1.0;
  b << 3.0;
  const Schedule s = Schedule::linear(Constraint::identity(1), a, b);
  EXPECT_DOUBLE_EQ(s.reduced(0.25)(0), 1.5);
  EXPECT_DOUBLE_EQ(s.reduced_rate(0.8)(0), 2.0);
}

TEST(Schedule, HermiteSamplesReproduceCubic)
{
  const auto grid = uniform_grid(11);
  RMatrix values(11, 1), slopes(11, 1);
  for (int i = 0; i < 11; ++i) {
    const double s = grid[static_cast<std::size_t>(i)];
    values(i, 0) = s * s * s;
    slopes(i, 0) = 3 * s * s;
  }
  const Schedule sch = Schedule::from_samples(Constraint::identity(1), grid, values, slopes);
  for (double s : {0.05, 0.33, 0.91}) {
    EXPECT_NEAR(sch.reduced(s)(0), s * s * s, 1e-14);
    EXPECT_NEAR(sch.reduced_rate(s)(0), 3 * s * s, 1e-13);
  }
  EXPECT_EQ(sch.grid().size(), 11u);
}

TEST(Schedule, RejectsBadGrid)
{
  RMatrix v = RMatrix::Zero(2, 1);
  EXPECT_THROW(Schedule::from_samples(Constraint::identity(1), {0.0, 0.5}, v, v), Error);
  EXPECT_THROW(Schedule::from_samples(Constraint::identity(1), {0.5, 0.5}, v, v), Error);
}

TEST(Grid, Uniform)
{
  const auto g = uniform_grid(5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 0.0);
  EXPECT_DOUBLE_EQ(g[2], 0.5);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
}

}  // namespace
}  // namespace qabos
