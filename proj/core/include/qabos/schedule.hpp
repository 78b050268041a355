// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qabos/types.hpp"

namespace qabos
{

/// Map from the reduced (free) schedule parameters p to the full drive
/// vector q consumed by a LindbladModel. Affine maps q = A p + b are the
/// common case; general smooth maps (for example a constant-power circle)
/// carry a Jacobian callback.
class Constraint
{
public:
  using Map = std::function<RVector(const RVector &)>;
  using Jacobian = std::function<RMatrix(const RVector &)>;

  static Constraint identity(int drives);
  static Constraint affine(RMatrix matrix, RVector offset);
  /// If `jacobian` is empty, it is evaluated by central differences.
  static Constraint general(int reduced, int drives, Map map, Jacobian jacobian = {});

  int reduced_size() const { return reduced_; }
  int drive_size() const { return drives_; }
  bool is_affine() const { return affine_; }

  RVector apply(const RVector &p) const;
  RMatrix jacobian(const RVector &p) const;

private:
  Constraint() = default;

  int reduced_ = 0;
  int drives_ = 0;
  bool affine_ = true;
  RMatrix matrix_;
  RVector offset_;
  Map map_;
  Jacobian jacobian_;
};

/// Ω_x + Ω_y = total with p = Ω_y; the drive vector is (total - p, p).
Constraint sum_constraint(double total);
/// Ω_x² + Ω_y² = amplitude² with p the polar angle; q = amplitude (cos p, sin p).
Constraint constant_power_constraint(double amplitude);

/// Drive trajectory on s ∈ [0, 1] in reduced coordinates, with its constraint.
class Schedule
{
public:
  using Curve = std::function<RVector(double)>;

  /// Analytic schedule: `value(s)` and `rate(s)` give p(s) and p'(s).
  static Schedule from_functions(Constraint constraint, Curve value, Curve rate);

  /// Piecewise-cubic Hermite schedule through (grid[i], values.row(i)) with
  /// slopes.row(i). The grid must start at 0, end at 1 and increase strictly.
  static Schedule from_samples(Constraint constraint, std::vector<double> grid, RMatrix values,
                               RMatrix slopes);

  /// Straight line in reduced coordinates between `start` and `end`.
  static Schedule linear(Constraint constraint, const RVector &start, const RVector &end);

  const Constraint &constraint() const { return constraint_; }
  int reduced_size() const { return constraint_.reduced_size(); }
  int drive_size() const { return constraint_.drive_size(); }

  RVector reduced(double s) const;
  RVector reduced_rate(double s) const;
  RVector drives(double s) const;
  RVector drive_rates(double s) const;

  /// Sample points if this schedule was built from samples; empty otherwise.
  const std::vector<double> &grid() const;

private:
  struct Samples
  {
    std::vector<double> grid;
    RMatrix values;
    RMatrix slopes;
  };

  Schedule(Constraint constraint) : constraint_(std::move(constraint)) {}

  Constraint constraint_;
  Curve value_;
  Curve rate_;
  std::shared_ptr<const Samples> samples_;
};

/// Uniform grid of `points` values on [0, 1].
std::vector<double> uniform_grid(int points);

}  // namespace qabos
