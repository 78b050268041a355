// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qabos
{

void LagrangianConfig::validate() const
{
  if (!(tau > 0.0) || !std::isfinite(tau))
  {
    throw Error(ErrorCode::kInvalidArgument, "tau must be positive");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
  {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
}

namespace
{

// Per-point sorted eigenvalues, used as-is for selector policies.
SpectralBranches unmatched_branches(const Liouvillian &l, const Schedule &schedule,
                                    const std::vector<double> &grid)
{
  SpectralBranches out;
  out.grid = grid;
  const int n = l.side();
  out.values.resize(static_cast<Eigen::Index>(grid.size()), n);
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    const CMatrix m = l.at(schedule.drives(grid[i]));
    out.scale = std::max(out.scale, m.norm());
    CVector v = eigenvalues(m);
    sort_lexicographic(v);
    out.values.row(static_cast<Eigen::Index>(i)) = v.transpose();
  }
  out.multiplicity.assign(static_cast<std::size_t>(n), 1);
  return out;
}

std::size_t cell_of(const std::vector<double> &grid, double s)
{
  auto it = std::upper_bound(grid.begin(), grid.end(), s);
  std::size_t i = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(i, grid.size() - 2);
}

}  // namespace

LagrangianEvaluator::LagrangianEvaluator(Liouvillian liouvillian, Schedule schedule,
                                         LagrangianConfig config, std::vector<double> grid)
  : liouvillian_(std::move(liouvillian)), schedule_(std::move(schedule)), config_(std::move(config))
{
  config_.validate();
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
  {
    throw Error(ErrorCode::kDomain, "Lagrangian grid must span [0, 1]");
  }
  if (config_.gap.mode == GapMode::kSelector)
  {
    branches_ = unmatched_branches(liouvillian_, schedule_, grid);
  }
  else
  {
    TrackOptions opts;
    opts.vanish_tol = config_.gap.vanish_tol;
    branches_ = track_branches(liouvillian_, schedule_, grid, opts);
  }
  gap_ = min_nonvanishing_gap(branches_, config_.gap);

  const auto n = grid.size();
  integral_.assign(n, 0.0);
  double max_re = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto k = static_cast<Eigen::Index>(i);
    max_re = std::max(max_re, std::abs(gap_.values(k).real()));
    if (i > 0)
    {
      integral_[i] = integral_[i - 1] + 0.5 * (grid[i] - grid[i - 1]) *
                                            (gap_.values(k - 1).real() + gap_.values(k).real());
    }
  }
  drop_ = config_.drop_exponential || max_re <= gap_.vanish_tol;
}

cplx LagrangianEvaluator::gap(double s) const
{
  if (!(s >= 0.0 && s <= 1.0))
  {
    throw Error(ErrorCode::kDomain, "gap evaluated outside [0, 1]");
  }
  const auto &g = gap_.grid;
  const auto it = std::lower_bound(g.begin(), g.end(), s);
  if (it != g.end() && *it == s)
  {
    return gap_.values(it - g.begin());
  }
  const CVector v = eigenvalues(liouvillian_.at(schedule_.drives(s)));
  if (config_.gap.mode == GapMode::kSelector)
  {
    const auto [a, b] = config_.gap.selector(v);
    return v(a) - v(b);
  }
  const std::size_t i = cell_of(g, s);
  const double t = (s - g[i]) / (g[i + 1] - g[i]);
  const auto r0 = static_cast<Eigen::Index>(i);
  const cplx pa = (1 - t) * branches_.values(r0, gap_.alpha) + t * branches_.values(r0 + 1, gap_.alpha);
  const cplx pb = (1 - t) * branches_.values(r0, gap_.beta) + t * branches_.values(r0 + 1, gap_.beta);
  Eigen::Index a = 0;
  (v.array() - pa).abs().minCoeff(&a);
  Eigen::Index b = (a == 0) ? 1 : 0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
  {
    if (k != a && std::abs(v(k) - pb) < std::abs(v(b) - pb))
    {
      b = k;
    }
  }
  return v(a) - v(b);
}

double LagrangianEvaluator::re_integral(double s) const
{
  if (!(s >= 0.0 && s <= 1.0))
  {
    throw Error(ErrorCode::kDomain, "integral evaluated outside [0, 1]");
  }
  const auto &g = gap_.grid;
  const std::size_t i = cell_of(g, s);
  const double t = (s - g[i]) / (g[i + 1] - g[i]);
  return (1 - t) * integral_[i] + t * integral_[i + 1];
}

double q_factor(cplx gap, double re_integral, double tau, bool drop)
{
  const double e = drop ? 1.0 : std::exp(re_integral / tau);
  const double f = e / std::norm(gap);
  return f * f;
}

LagrangianValue LagrangianEvaluator::at(double s) const
{
  LagrangianValue out;
  out.gap = gap(s);
  const double mod2 = std::norm(out.gap);
  if (std::sqrt(mod2) <= gap_.vanish_tol)
  {
    throw Error(ErrorCode::kGapCollapse, "gap collapses at s=" + std::to_string(s));
  }
  out.V = hs_norm2(superoperator_derivative(liouvillian_, schedule_, s).matrix);
  out.re_integral = drop_ ? 0.0 : re_integral(s);
  const double e = drop_ ? 1.0 : std::exp(out.re_integral / config_.tau);
  out.L_os = std::sqrt(out.V) / mod2 * e;
  out.Q = q_factor(out.gap, out.re_integral, config_.tau, drop_);
  out.L_tilde = out.Q * out.V;
  return out;
}

double LagrangianEvaluator::speed(double s) const
{
  const LagrangianValue v = at(s);
  if (v.V == 0.0)
  {
    throw Error(ErrorCode::kInfiniteSpeed, "schedule is stationary at s=" + std::to_string(s));
  }
  return config_.epsilon / v.L_os;
}

double LagrangianEvaluator::functional_time() const
{
  const auto &g = gap_.grid;
  double total = 0.0;
  double prev = 1.0 / speed(g[0]);
  for (std::size_t i = 1; i < g.size(); ++i)
  {
    const double cur = 1.0 / speed(g[i]);
    total += 0.5 * (g[i] - g[i - 1]) * (prev + cur);
    prev = cur;
  }
  return total;
}

double adiabatic_speed(const Liouvillian &liouvillian, const Schedule &schedule, double s,
                       const LagrangianConfig &config)
{
  return LagrangianEvaluator(liouvillian, schedule, config).speed(s);
}

LagrangianValue lagrangian(const Liouvillian &liouvillian, const Schedule &schedule, double s,
                           const LagrangianConfig &config)
{
  return LagrangianEvaluator(liouvillian, schedule, config).at(s);
}

double functional_time(const Liouvillian &liouvillian, const Schedule &schedule,
                       const LagrangianConfig &config, std::vector<double> grid)
{
  return LagrangianEvaluator(liouvillian, schedule, config, std::move(grid)).functional_time();
}

RMatrix drive_metric(const Liouvillian &liouvillian, const RVector &q)
{
  const int m = liouvillian.model().drive_arity();
  std::vector<CMatrix> parts;
  parts.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
  {
    parts.push_back(liouvillian.drive_derivative(q, k));
  }
  RMatrix g(m, m);
  for (int k = 0; k < m; ++k)
  {
    for (int n = k; n < m; ++n)
    {
      const double v = (parts[static_cast<std::size_t>(k)].conjugate().array() *
                        parts[static_cast<std::size_t>(n)].array())
                           .sum()
                           .real();
      g(k, n) = v;
      g(n, k) = v;
    }
  }
  return g;
}

Condition1Report check_condition1(const Liouvillian &liouvillian, const Schedule &schedule,
                                  const LagrangianConfig &config, double tol,
                                  std::vector<double> grid)
{
  Condition1Report r;
  const LagrangianEvaluator open(liouvillian, schedule, config, grid);
  const CVector &g = open.gap_curve().values;
  const double gmax = g.cwiseAbs().maxCoeff();
  const cplx g0 = g(0);
  r.gap_constant = (g.array() - g0).abs().maxCoeff() <= tol * std::max(1.0, std::abs(g0));
  r.gap_imaginary = g.real().cwiseAbs().maxCoeff() <= tol * std::max(1.0, gmax);
  r.rates_constant = true;
  r.holds = r.rates_constant && r.gap_constant && r.gap_imaginary;

  LagrangianConfig closed_cfg = config;
  closed_cfg.gap.vanish_tol = 0.0;
  const LagrangianEvaluator closed(Liouvillian(liouvillian.model().closed()), schedule, closed_cfg,
                                   grid);
  std::vector<double> ratios;
  ratios.reserve(grid.size());
  for (double s : grid)
  {
    const LagrangianValue lo = open.at(s);
    const LagrangianValue lc = closed.at(s);
    if (lc.L_os > 0.0)
    {
      ratios.push_back(lo.L_os / lc.L_os);
    }
  }
  if (ratios.empty())
  {
    r.equivalent = false;
    return r;
  }
  double mean = 0.0;
  for (double x : ratios)
  {
    mean += x;
  }
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double x : ratios)
  {
    var += (x - mean) * (x - mean);
  }
  var /= static_cast<double>(ratios.size());
  r.ratio = mean;
  r.ratio_spread = mean != 0.0 ? std::sqrt(var) / std::abs(mean) : std::numeric_limits<double>::infinity();
  r.equivalent = r.holds && r.ratio_spread <= tol;
  return r;
}

}  // namespace qabos
