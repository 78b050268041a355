// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/el_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/numeric/odeint.hpp>

namespace qabos
{

namespace odeint = boost::numeric::odeint;

ElProblem::ElProblem(Liouvillian liouvillian, Constraint constraint, LagrangianConfig config,
                     const Boundary &boundary, std::vector<double> reference_grid)
  : liouvillian_(std::move(liouvillian)),
    constraint_(std::move(constraint)),
    config_(std::move(config)),
    boundary_(boundary),
    gap_(liouvillian_, config_.gap, Schedule::linear(constraint_, boundary.start, boundary.end),
         reference_grid)
{
  config_.validate();
  if (constraint_.drive_size() != liouvillian_.model().drive_arity())
  {
    throw Error(ErrorCode::kShape, "constraint output does not match the model drive count");
  }
  if (boundary.start.size() != size() || boundary.end.size() != size())
  {
    throw Error(ErrorCode::kShape, "boundary values have wrong length");
  }
  const LagrangianEvaluator ref(liouvillian_, Schedule::linear(constraint_, boundary.start, boundary.end),
                                config_, reference_grid);
  drop_ = ref.exponential_dropped();
  constant_mass_ = liouvillian_.model().is_affine() && constraint_.is_affine();
  if (constant_mass_)
  {
    mass_ = mass(boundary.start);
  }
  else
  {
    // Structural check: a mass matrix that is constant on the reference ramp
    // to rounding level is treated as exactly constant.
    const Schedule ramp = Schedule::linear(constraint_, boundary.start, boundary.end);
    const RMatrix m0 = mass(boundary.start);
    double spread = 0.0;
    for (double s : {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0})
    {
      spread = std::max(spread, (mass(ramp.reduced(s)) - m0).cwiseAbs().maxCoeff());
    }
    if (spread <= 1e-12 * std::max(1.0, m0.cwiseAbs().maxCoeff()))
    {
      constant_mass_ = true;
      mass_ = m0;
    }
  }
}

void ElProblem::set_q_scale(double scale)
{
  if (!(scale > 0.0) || !std::isfinite(scale))
  {
    throw Error(ErrorCode::kInvalidArgument, "Q scale must be positive");
  }
  q_scale_ = scale;
}

void ElProblem::reset()
{
  gap_.reset();
}

cplx ElProblem::gap(const RVector &p)
{
  const cplx g = gap_(constraint_.apply(p));
  if (!(std::abs(g) > gap_.vanish_tol()))
  {
    throw Error(ErrorCode::kSingularPath, "gap collapses along the trajectory");
  }
  return g;
}

double ElProblem::q_value(const RVector &p, double re_integral)
{
  return q_scale_ * q_factor(gap(p), re_integral, config_.tau, drop_);
}

RMatrix ElProblem::mass(const RVector &p) const
{
  if (constant_mass_ && mass_.size() > 0)
  {
    return mass_;
  }
  const RVector q = constraint_.apply(p);
  const RMatrix j = constraint_.jacobian(p);
  return j.transpose() * drive_metric(liouvillian_, q) * j;
}

std::pair<cplx, CVector> ElProblem::gap_gradient(const RVector &p)
{
  const int m = size();
  const RVector q = constraint_.apply(p);
  const Eigen::ComplexEigenSolver<CMatrix> es(liouvillian_.at(q));
  if (es.info() != Eigen::Success)
  {
    throw Error(ErrorCode::kNumerical, "eigen-decomposition failed");
  }
  const CVector &values = es.eigenvalues();
  const auto [a, b] = gap_.select(values);
  const cplx g = values(a) - values(b);
  if (!(std::abs(g) > gap_.vanish_tol()))
  {
    throw Error(ErrorCode::kSingularPath, "gap collapses along the trajectory");
  }

  CVector grad(m);
  const Eigen::PartialPivLU<CMatrix> lu(es.eigenvectors());
  if (lu.rcond() > 1e-10)
  {
    const CMatrix w = lu.inverse();
    const RMatrix j = constraint_.jacobian(p);
    CVector dq(q.size());
    for (Eigen::Index k = 0; k < q.size(); ++k)
    {
      const CMatrix d = liouvillian_.drive_derivative(q, static_cast<int>(k));
      dq(k) = (w.row(a) * d * es.eigenvectors().col(a))(0) -
              (w.row(b) * d * es.eigenvectors().col(b))(0);
    }
    grad = j.transpose().cast<cplx>() * dq;
    return {g, grad};
  }
  for (int k = 0; k < m; ++k)
  {
    const double h = 1e-6 * std::max(1.0, std::abs(p(k)));
    RVector hi = p, lo = p;
    hi(k) += h;
    lo(k) -= h;
    grad(k) = (gap(hi) - gap(lo)) / (2.0 * h);
  }
  gap(p);
  return {g, grad};
}

ElProblem::QSample ElProblem::q_sample(const RVector &p, double re_integral)
{
  const auto [g, dg] = gap_gradient(p);
  QSample out{g, q_scale_ * q_factor(g, re_integral, config_.tau, drop_), RVector(size())};
  const double mod2 = std::norm(g);
  for (int k = 0; k < size(); ++k)
  {
    out.gradient(k) = -4.0 * out.q * (std::conj(g) * dg(k)).real() / mod2;
  }
  return out;
}

RVector ElProblem::q_gradient(const RVector &p, double re_integral)
{
  return q_sample(p, re_integral).gradient;
}

RVector assemble_el_rhs(ElProblem &problem, const RVector &p, const RVector &dp,
                        double re_integral)
{
  const int m = problem.size();
  if (p.size() != m || dp.size() != m)
  {
    throw Error(ErrorCode::kShape, "EL state has wrong length");
  }
  const ElProblem::QSample sample = problem.q_sample(p, re_integral);
  const cplx g = sample.gap;
  const double q = sample.q;
  const RVector &gq = sample.gradient;
  const RMatrix mass = problem.mass(p);

  const Eigen::SelfAdjointEigenSolver<RMatrix> es(mass, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(top > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * top)
  {
    throw Error(ErrorCode::kDegenerateDrive, "∂²V/∂p'∂p' is singular");
  }

  const RVector mp = mass * dp;
  const double v = dp.dot(mp);
  RVector rhs = gq * v - 2.0 * gq.dot(dp) * mp;
  if (!problem.exponential_dropped())
  {
    const double dq_ds = q * 2.0 * g.real() / problem.config().tau;
    rhs -= dq_ds * 2.0 * mp;
  }
  if (!problem.constant_mass())
  {
    for (int k = 0; k < m; ++k)
    {
      const double h = 1e-5 * std::max(1.0, std::abs(p(k)));
      RVector hi = p, lo = p;
      hi(k) += h;
      lo(k) -= h;
      const RMatrix dm = (problem.mass(hi) - problem.mass(lo)) / (2.0 * h);
      const RVector dmp = dm * dp;
      rhs(k) += q * dp.dot(dmp);
      rhs -= 2.0 * q * dp(k) * dmp;
    }
  }
  return (2.0 * q * mass).ldlt().solve(rhs);
}

namespace
{

using State = std::vector<double>;

/// Right-hand-side evaluations allowed per trial trajectory.
constexpr long kMaxEvaluations = 400000;

struct Trial
{
  RMatrix values;
  RMatrix slopes;
  RVector miss;
};

Trial shoot(ElProblem &problem, const RVector &slope, const std::vector<double> &grid,
            const SolverOptions &opts)
{
  const int m = problem.size();
  problem.reset();
  State y(static_cast<std::size_t>(2 * m + 1), 0.0);
  for (int k = 0; k < m; ++k)
  {
    y[static_cast<std::size_t>(k)] = problem.boundary().start(k);
    y[static_cast<std::size_t>(m + k)] = slope(k);
  }
  long evaluations = 0;
  auto system = [&problem, &evaluations, m](const State &x, State &dxdt, double s) {
    if (++evaluations > kMaxEvaluations)
    {
      throw Error(ErrorCode::kStiffness,
                  "EL integration exceeded its step budget near s = " + std::to_string(s));
    }
    RVector p(m), dp(m);
    for (int k = 0; k < m; ++k)
    {
      p(k) = x[static_cast<std::size_t>(k)];
      dp(k) = x[static_cast<std::size_t>(m + k)];
    }
    const double integral = x[static_cast<std::size_t>(2 * m)];
    const RVector ddp = assemble_el_rhs(problem, p, dp, integral);
    for (int k = 0; k < m; ++k)
    {
      dxdt[static_cast<std::size_t>(k)] = dp(k);
      dxdt[static_cast<std::size_t>(m + k)] = ddp(k);
    }
    dxdt[static_cast<std::size_t>(2 * m)] =
        problem.exponential_dropped() ? 0.0 : problem.gap(p).real();
  };

  Trial t;
  const auto n = static_cast<Eigen::Index>(grid.size());
  t.values.resize(n, m);
  t.slopes.resize(n, m);
  Eigen::Index row = 0;
  auto observer = [&](const State &x, double) {
    for (int k = 0; k < m; ++k)
    {
      const double a = x[static_cast<std::size_t>(k)];
      const double b = x[static_cast<std::size_t>(m + k)];
      if (!std::isfinite(a) || !std::isfinite(b))
      {
        throw Error(ErrorCode::kNumerical, "EL trajectory diverged");
      }
      t.values(row, k) = a;
      t.slopes(row, k) = b;
    }
    ++row;
  };
  auto stepper = odeint::make_dense_output(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, system, y, grid.begin(), grid.end(), 1e-4, observer,
                          odeint::max_step_checker(200000));
  t.miss = t.values.row(n - 1).transpose() - problem.boundary().end;
  return t;
}

double miss_norm(const RVector &miss, double scale)
{
  return miss.cwiseAbs().maxCoeff() / scale;
}

BVPSolution finish(const ElProblem &problem, const std::vector<double> &grid, Trial t,
                   double residual, int iterations)
{
  const auto last = static_cast<Eigen::Index>(grid.size()) - 1;
  t.values.row(0) = problem.boundary().start.transpose();
  t.values.row(last) = problem.boundary().end.transpose();
  BVPSolution out{Schedule::from_samples(problem.constraint(), grid, t.values, t.slopes),
                  grid,
                  t.values,
                  t.slopes,
                  residual,
                  iterations,
                  true,
                  false};
  return out;
}

BVPSolution run_shooting(ElProblem &problem, const SolverOptions &opts)
{
  const int m = problem.size();
  const std::vector<double> grid = uniform_grid(opts.grid_points);
  const RVector span = problem.boundary().end - problem.boundary().start;
  const double scale = std::max(1.0, span.cwiseAbs().maxCoeff());

  // Rejects singular mass matrices before any integration.
  {
    RVector probe = opts.initial_slope.value_or(span);
    assemble_el_rhs(problem, problem.boundary().start, probe, 0.0);
  }

  RVector slope = opts.initial_slope.value_or(span);
  if (slope.size() != m)
  {
    throw Error(ErrorCode::kShape, "initial slope has wrong length");
  }

  double best = std::numeric_limits<double>::infinity();
  std::string last_failure;
  auto attempt = [&](const RVector &s, Trial &out) -> bool {
    try
    {
      out = shoot(problem, s, grid, opts);
      best = std::min(best, miss_norm(out.miss, scale));
      return true;
    }
    catch (const Error &e)
    {
      if (e.code() == ErrorCode::kDegenerateDrive || e.code() == ErrorCode::kStiffness)
      {
        throw;
      }
      last_failure = e.what();
    }
    catch (const std::exception &e)
    {
      last_failure = e.what();
    }
    return false;
  };

  Trial cur;
  int iterations = 0;
  {
    int tries = 0;
    while (!attempt(slope, cur))
    {
      if (++tries > 30)
      {
        throw Error(ErrorCode::kSingularPath,
                    "no trial trajectory reaches s=1: " + last_failure);
      }
      slope *= 0.5;
    }
  }
  double res = miss_norm(cur.miss, scale);

  if (m == 1)
  {
    double s0 = slope(0);
    double f0 = cur.miss(0);
    double s1 = s0 + 1e-3 * std::max(std::abs(s0), 1e-3);
    Trial next;
    while (!attempt(RVector::Constant(1, s1), next))
    {
      s1 = 0.5 * (s0 + s1);
    }
    double f1 = next.miss(0);
    cur = next;
    res = miss_norm(cur.miss, scale);
    while (res >= opts.residual_tol && iterations < opts.max_iterations)
    {
      ++iterations;
      if (f1 == f0)
      {
        break;
      }
      double s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
      Trial cand;
      int halvings = 0;
      while (!attempt(RVector::Constant(1, s2), cand))
      {
        if (++halvings > 40)
        {
          throw Error(ErrorCode::kSingularPath, "secant trials cross a singularity: " + last_failure);
        }
        s2 = 0.5 * (s1 + s2);
      }
      s0 = s1;
      f0 = f1;
      s1 = s2;
      f1 = cand.miss(0);
      cur = cand;
      res = miss_norm(cur.miss, scale);
    }
  }
  else
  {
    while (res >= opts.residual_tol && iterations < opts.max_iterations)
    {
      ++iterations;
      RMatrix jac(m, m);
      for (int k = 0; k < m; ++k)
      {
        const double h = 1e-6 * std::max(1.0, std::abs(slope(k)));
        RVector probe = slope;
        probe(k) += h;
        Trial t;
        if (!attempt(probe, t))
        {
          probe(k) = slope(k) - h;
          if (!attempt(probe, t))
          {
            throw Error(ErrorCode::kSingularPath, "Newton probe failed: " + last_failure);
          }
          jac.col(k) = (cur.miss - t.miss) / h;
        }
        else
        {
          jac.col(k) = (t.miss - cur.miss) / h;
        }
      }
      const Eigen::FullPivLU<RMatrix> lu(jac);
      if (!lu.isInvertible())
      {
        break;
      }
      const RVector step = -lu.solve(cur.miss);
      double lambda = 1.0;
      bool improved = false;
      while (lambda > 1e-4)
      {
        Trial cand;
        const RVector trial_slope = slope + lambda * step;
        if (attempt(trial_slope, cand) && miss_norm(cand.miss, scale) < res)
        {
          slope = trial_slope;
          cur = cand;
          res = miss_norm(cur.miss, scale);
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved)
      {
        break;
      }
    }
  }

  if (!(res < opts.residual_tol))
  {
    throw Error(ErrorCode::kNonConvergence,
                "shooting did not converge; best residual " + std::to_string(best));
  }
  return finish(problem, grid, std::move(cur), res, iterations);
}

/// With one free parameter every admissible path visits every value between
/// the boundary points, so a gap closing anywhere on that segment is fatal.
/// Near an exceptional point the computed gap only shrinks like √ε, hence
/// the loose threshold.
void check_one_dimensional_path(ElProblem &problem)
{
  const RVector &a = problem.boundary().start;
  const RVector &b = problem.boundary().end;
  problem.reset();
  double scale = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  double where = 0.0;
  for (double s : uniform_grid(401))
  {
    const RVector p = a + s * (b - a);
    const double g = std::abs(problem.gap(p));
    scale = std::max(scale, problem.liouvillian().at(problem.constraint().apply(p)).norm());
    if (g < smallest)
    {
      smallest = g;
      where = p(0);
    }
  }
  problem.reset();
  if (smallest <= 1e-6 * scale)
  {
    throw Error(ErrorCode::kSingularPath,
                "gap closes at p = " + std::to_string(where) + " between the boundary values");
  }
}

}  // namespace

BVPSolution solve_bvp(const Liouvillian &liouvillian, const Constraint &constraint,
                      const Boundary &boundary, const LagrangianConfig &config,
                      const SolverOptions &options)
{
  if (options.grid_points < 11)
  {
    throw Error(ErrorCode::kInvalidArgument, "solver grid needs at least 11 points");
  }
  if (!(options.rtol > 0.0) || !(options.atol > 0.0) || !(options.residual_tol > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "solver tolerances must be positive");
  }
  if (boundary.start.size() != constraint.reduced_size() ||
      boundary.end.size() != constraint.reduced_size())
  {
    throw Error(ErrorCode::kShape, "boundary values have wrong length");
  }

  bool condition1 = false;
  if (options.use_condition1 && !liouvillian.model().dissipators().empty())
  {
    const Schedule ramp = Schedule::linear(constraint, boundary.start, boundary.end);
    const Condition1Report rep =
        check_condition1(liouvillian, ramp, config, 1e-9, uniform_grid(201));
    condition1 = rep.equivalent;
  }

  LagrangianConfig cfg = config;
  if (condition1)
  {
    cfg.gap.vanish_tol = 0.0;
  }
  ElProblem problem(condition1 ? Liouvillian(liouvillian.model().closed()) : liouvillian,
                    constraint, cfg, boundary);
  problem.set_q_scale(options.q_scale);
  if (problem.size() == 1)
  {
    check_one_dimensional_path(problem);
  }
  BVPSolution out = run_shooting(problem, options);
  out.condition1_path = condition1;
  return out;
}

Schedule analytic_qubit_sum_constraint(double omega0, double gamma)
{
  if (!(omega0 > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "Omega_0 must be positive");
  }
  if (!(gamma >= 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be >= 0");
  }
  const double t2 = std::abs(omega0 * omega0 - 2.0 * gamma * gamma);
  if (t2 <= 1e-12 * omega0 * omega0)
  {
    throw Error(ErrorCode::kSingularParameter, "Omega_0^2 = 2 gamma^2");
  }
  const double wt = std::sqrt(t2);
  const double a = std::atan(omega0 / wt);
  return Schedule::from_functions(
      sum_constraint(omega0),
      [omega0, wt, a](double s) {
        RVector p(1);
        if (s == 0.0)
        {
          p(0) = 0.0;
        }
        else if (s == 1.0)
        {
          p(0) = omega0;
        }
        else
        {
          p(0) = 0.5 * omega0 - 0.5 * wt * std::tan((1.0 - 2.0 * s) * a);
        }
        return p;
      },
      [wt, a](double s) {
        const double c = std::cos((1.0 - 2.0 * s) * a);
        RVector p(1);
        p(0) = wt * a / (c * c);
        return p;
      });
}

Schedule analytic_constant_power(double omega0)
{
  if (!(omega0 > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "Omega_0 must be positive");
  }
  constexpr double half_pi = 0.5 * std::numbers::pi;
  return Schedule::from_functions(
      constant_power_constraint(omega0),
      [](double s) {
        RVector p(1);
        p(0) = half_pi * s;
        return p;
      },
      [](double) {
        RVector p(1);
        p(0) = half_pi;
        return p;
      });
}

}  // namespace qabos
