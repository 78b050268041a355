// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace qabos
{

Constraint Constraint::identity(int drives)
{
  if (drives < 1)
  {
    throw Error(ErrorCode::kInvalidArgument, "constraint needs at least one drive");
  }
  return affine(RMatrix::Identity(drives, drives), RVector::Zero(drives));
}

Constraint Constraint::affine(RMatrix matrix, RVector offset)
{
  if (matrix.rows() != offset.size() || matrix.cols() < 1)
  {
    throw Error(ErrorCode::kShape, "affine constraint matrix/offset mismatch");
  }
  Constraint c;
  c.reduced_ = static_cast<int>(matrix.cols());
  c.drives_ = static_cast<int>(matrix.rows());
  c.affine_ = true;
  c.matrix_ = std::move(matrix);
  c.offset_ = std::move(offset);
  return c;
}

Constraint Constraint::general(int reduced, int drives, Map map, Jacobian jacobian)
{
  if (reduced < 1 || drives < 1 || !map)
  {
    throw Error(ErrorCode::kInvalidArgument, "general constraint needs sizes and a map");
  }
  Constraint c;
  c.reduced_ = reduced;
  c.drives_ = drives;
  c.affine_ = false;
  c.map_ = std::move(map);
  c.jacobian_ = std::move(jacobian);
  return c;
}

RVector Constraint::apply(const RVector &p) const
{
  if (p.size() != reduced_)
  {
    throw Error(ErrorCode::kShape, "reduced parameter vector has wrong length");
  }
  if (affine_)
  {
    return matrix_ * p + offset_;
  }
  return map_(p);
}

RMatrix Constraint::jacobian(const RVector &p) const
{
  if (affine_)
  {
    return matrix_;
  }
  if (jacobian_)
  {
    return jacobian_(p);
  }
  RMatrix jac(drives_, reduced_);
  for (int k = 0; k < reduced_; ++k)
  {
    const double h = 1e-6 * std::max(1.0, std::abs(p(k)));
    RVector hi = p, lo = p;
    hi(k) += h;
    lo(k) -= h;
    jac.col(k) = (map_(hi) - map_(lo)) / (2.0 * h);
  }
  return jac;
}

Constraint sum_constraint(double total)
{
  RMatrix a(2, 1);
  a << -1.0, 1.0;
  RVector b(2);
  b << total, 0.0;
  return Constraint::affine(a, b);
}

Constraint constant_power_constraint(double amplitude)
{
  return Constraint::general(
      1, 2,
      [amplitude](const RVector &p) {
        RVector q(2);
        q << amplitude * std::cos(p(0)), amplitude * std::sin(p(0));
        return q;
      },
      [amplitude](const RVector &p) {
        RMatrix j(2, 1);
        j << -amplitude * std::sin(p(0)), amplitude * std::cos(p(0));
        return j;
      });
}

Schedule Schedule::from_functions(Constraint constraint, Curve value, Curve rate)
{
  if (!value || !rate)
  {
    throw Error(ErrorCode::kInvalidArgument, "schedule needs value and rate functions");
  }
  Schedule out(std::move(constraint));
  out.value_ = std::move(value);
  out.rate_ = std::move(rate);
  return out;
}

Schedule Schedule::from_samples(Constraint constraint, std::vector<double> grid, RMatrix values,
                                RMatrix slopes)
{
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n < 2 || values.rows() != n || slopes.rows() != n ||
      values.cols() != constraint.reduced_size() || slopes.cols() != values.cols())
  {
    throw Error(ErrorCode::kShape, "schedule samples do not match grid/constraint");
  }
  if (grid.front() != 0.0 || grid.back() != 1.0)
  {
    throw Error(ErrorCode::kDomain, "schedule grid must span [0, 1]");
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
  {
    if (!(grid[i] > grid[i - 1]))
    {
      throw Error(ErrorCode::kDomain, "schedule grid must increase strictly");
    }
  }
  Schedule out(std::move(constraint));
  out.samples_ = std::make_shared<const Samples>(
      Samples{std::move(grid), std::move(values), std::move(slopes)});
  return out;
}

Schedule Schedule::linear(Constraint constraint, const RVector &start, const RVector &end)
{
  if (start.size() != constraint.reduced_size() || end.size() != start.size())
  {
    throw Error(ErrorCode::kShape, "linear schedule endpoints have wrong length");
  }
  const RVector delta = end - start;
  return from_functions(
      std::move(constraint),
      [start, delta](double s) -> RVector {
        // Evaluate the endpoints exactly.
        if (s >= 1.0)
        {
          return start + delta;
        }
        return start + s * delta;
      },
      [delta](double) -> RVector { return delta; });
}

namespace
{

// Index i with grid[i] <= s <= grid[i+1].
std::size_t locate(const std::vector<double> &grid, double s)
{
  auto it = std::upper_bound(grid.begin(), grid.end(), s);
  std::size_t i = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(i, grid.size() - 2);
}

void check_domain(double s)
{
  if (!(s >= 0.0 && s <= 1.0))
  {
    throw Error(ErrorCode::kDomain, "schedule evaluated outside [0, 1]");
  }
}

}  // namespace

RVector Schedule::reduced(double s) const
{
  check_domain(s);
  if (!samples_)
  {
    return value_(s);
  }
  const auto &g = samples_->grid;
  const std::size_t i = locate(g, s);
  if (s == g[i])
  {
    return samples_->values.row(static_cast<Eigen::Index>(i)).transpose();
  }
  if (s == g[i + 1])
  {
    return samples_->values.row(static_cast<Eigen::Index>(i + 1)).transpose();
  }
  const double h = g[i + 1] - g[i];
  const double t = (s - g[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const auto r0 = static_cast<Eigen::Index>(i), r1 = r0 + 1;
  return (h00 * samples_->values.row(r0) + h10 * h * samples_->slopes.row(r0) +
          h01 * samples_->values.row(r1) + h11 * h * samples_->slopes.row(r1))
      .transpose();
}

RVector Schedule::reduced_rate(double s) const
{
  check_domain(s);
  if (!samples_)
  {
    return rate_(s);
  }
  const auto &g = samples_->grid;
  const std::size_t i = locate(g, s);
  const double h = g[i + 1] - g[i];
  const double t = (s - g[i]) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  const auto r0 = static_cast<Eigen::Index>(i), r1 = r0 + 1;
  return (d00 * samples_->values.row(r0) + d10 * samples_->slopes.row(r0) +
          d01 * samples_->values.row(r1) + d11 * samples_->slopes.row(r1))
      .transpose();
}

RVector Schedule::drives(double s) const
{
  return constraint_.apply(reduced(s));
}

RVector Schedule::drive_rates(double s) const
{
  const RVector p = reduced(s);
  return constraint_.jacobian(p) * reduced_rate(s);
}

const std::vector<double> &Schedule::grid() const
{
  static const std::vector<double> kEmpty;
  return samples_ ? samples_->grid : kEmpty;
}

std::vector<double> uniform_grid(int points)
{
  if (points < 2)
  {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least two points");
  }
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
  {
    g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  }
  g.back() = 1.0;
  return g;
}

}  // namespace qabos
