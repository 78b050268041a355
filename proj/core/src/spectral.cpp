// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qabos
{

namespace
{

// Minimum-cost perfect matching (Kuhn-Munkres with potentials).
// Returns assignment[row] = column.
std::vector<int> hungarian(const RMatrix &cost)
{
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i)
  {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do
    {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j)
      {
        if (used[j])
        {
          continue;
        }
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j])
        {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j)
      {
        if (used[j])
        {
          u[p[j]] += delta;
          v[j] -= delta;
        }
        else
        {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do
    {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
  {
    assignment[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  }
  return assignment;
}

bool lex_less(const cplx &a, const cplx &b)
{
  if (a.real() != b.real())
  {
    return a.real() < b.real();
  }
  return a.imag() < b.imag();
}

}  // namespace

CVector eigenvalues(const CMatrix &matrix)
{
  if (matrix.rows() != matrix.cols())
  {
    throw Error(ErrorCode::kShape, "eigenvalues need a square matrix");
  }
  if (!matrix.allFinite())
  {
    throw Error(ErrorCode::kNumerical, "matrix has non-finite entries");
  }
  if (matrix.size() == 0)
  {
    return CVector();
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(matrix, false);
  if (solver.info() != Eigen::Success)
  {
    throw Error(ErrorCode::kNumerical,
                "eigensolver failed (norm " + std::to_string(matrix.norm()) + ")");
  }
  CVector values = solver.eigenvalues();
  const double scale = std::max(1.0, matrix.norm());
  if (std::abs(values.sum() - matrix.trace()) > 1e-9 * scale)
  {
    throw Error(ErrorCode::kNumerical, "eigenvalue sum does not match the trace");
  }
  return values;
}

CVector eigenvalues(const Superoperator &superop)
{
  return eigenvalues(superop.matrix);
}

void sort_lexicographic(CVector &values)
{
  std::sort(values.data(), values.data() + values.size(), lex_less);
}

double resolve_vanish_tol(double requested, double scale)
{
  if (requested > 0.0)
  {
    return requested;
  }
  return 1e-9 * std::max(scale, 1e-300);
}

SpectralBranches match_branches(const std::vector<double> &grid,
                                const std::vector<CVector> &per_point, double vanish_tol)
{
  if (grid.empty() || grid.size() != per_point.size())
  {
    throw Error(ErrorCode::kShape, "grid and eigenvalue lists differ in length");
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
  {
    if (!(grid[i] > grid[i - 1]))
    {
      throw Error(ErrorCode::kDomain, "branch grid must increase strictly");
    }
  }
  if (!(vanish_tol > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "vanish_tol must be positive");
  }
  const int n = static_cast<int>(per_point.front().size());
  SpectralBranches out;
  out.grid = grid;
  out.values.resize(static_cast<Eigen::Index>(grid.size()), n);

  CVector first = per_point.front();
  sort_lexicographic(first);
  out.values.row(0) = first.transpose();

  RMatrix cost(n, n);
  for (std::size_t i = 1; i < grid.size(); ++i)
  {
    const CVector &cur = per_point[i];
    if (cur.size() != n)
    {
      throw Error(ErrorCode::kShape, "eigenvalue count changes along the grid");
    }
    const auto prev_row = static_cast<Eigen::Index>(i - 1);
    for (int a = 0; a < n; ++a)
    {
      for (int b = 0; b < n; ++b)
      {
        cost(a, b) = std::norm(out.values(prev_row, a) - cur(b));
      }
    }
    const std::vector<int> assign = hungarian(cost);
    for (int a = 0; a < n; ++a)
    {
      const cplx pa = out.values(prev_row, a);
      const cplx ca = cur(assign[static_cast<std::size_t>(a)]);
      for (int b = a + 1; b < n; ++b)
      {
        const cplx pb = out.values(prev_row, b);
        const cplx cb = cur(assign[static_cast<std::size_t>(b)]);
        const double sep_prev = std::abs(pa - pb);
        const double sep_cur = std::abs(ca - cb);
        if (sep_prev <= vanish_tol || sep_cur <= vanish_tol)
        {
          continue;
        }
        const double swap = std::norm(pa - cb) + std::norm(pb - ca) - std::norm(pa - ca) -
                            std::norm(pb - cb);
        if (swap < vanish_tol * (sep_prev + sep_cur))
        {
          throw Error(ErrorCode::kResolution,
                      "ambiguous branch matching between s=" + std::to_string(grid[i - 1]) +
                          " and s=" + std::to_string(grid[i]) + "; refine the grid");
        }
      }
    }
    for (int a = 0; a < n; ++a)
    {
      out.values(static_cast<Eigen::Index>(i), a) = cur(assign[static_cast<std::size_t>(a)]);
    }
  }

  out.multiplicity.assign(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a)
  {
    for (int b = 0; b < n; ++b)
    {
      if ((out.values.col(a) - out.values.col(b)).cwiseAbs().maxCoeff() <= vanish_tol)
      {
        ++out.multiplicity[static_cast<std::size_t>(a)];
      }
    }
  }
  return out;
}

SpectralBranches track_branches(const Liouvillian &liouvillian, const Schedule &schedule,
                                const std::vector<double> &grid, const TrackOptions &options)
{
  if (grid.empty())
  {
    throw Error(ErrorCode::kInvalidArgument, "branch grid is empty");
  }
  for (double s : grid)
  {
    if (!(s >= 0.0 && s <= 1.0))
    {
      throw Error(ErrorCode::kDomain, "branch grid must lie in [0, 1]");
    }
  }
  const std::size_t n = grid.size();
  std::vector<CVector> values(n);
  std::vector<double> norms(n, 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
    {
      const CMatrix m = liouvillian.at(schedule.drives(grid[i]));
      norms[i] = m.norm();
      values[i] = eigenvalues(m);
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, options.threads));
  if (threads == 1 || n < 2 * threads)
  {
    work(0, n);
  }
  else
  {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t)
    {
      const std::size_t b = t * chunk, e = std::min(n, b + chunk);
      pool.emplace_back([&, b, e, t] {
        try
        {
          work(b, e);
        }
        catch (...)
        {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto &th : pool)
    {
      th.join();
    }
    for (auto &err : errors)
    {
      if (err)
      {
        std::rethrow_exception(err);
      }
    }
  }
  const double scale = *std::max_element(norms.begin(), norms.end());
  SpectralBranches out = match_branches(grid, values, resolve_vanish_tol(options.vanish_tol, scale));
  out.scale = scale;
  return out;
}

GapSelector conjugate_pair_selector()
{
  return [](const CVector &v) -> std::pair<int, int> {
    if (v.size() < 2)
    {
      throw Error(ErrorCode::kNoValidGap, "need at least two eigenvalues for a gap");
    }
    Eigen::Index a = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
    {
      if (v(i).imag() > v(a).imag())
      {
        a = i;
      }
    }
    const cplx target = std::conj(v(a));
    Eigen::Index b = (a == 0) ? 1 : 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
      if (i != a && std::abs(v(i) - target) < std::abs(v(b) - target))
      {
        b = i;
      }
    }
    return {static_cast<int>(a), static_cast<int>(b)};
  };
}

GapPolicy GapPolicy::explicit_pair(int a, int b, double tol)
{
  GapPolicy p;
  p.mode = GapMode::kExplicit;
  p.alpha = a;
  p.beta = b;
  p.vanish_tol = tol;
  return p;
}

GapPolicy GapPolicy::from_selector(GapSelector s, double tol)
{
  if (!s)
  {
    throw Error(ErrorCode::kInvalidArgument, "gap selector is empty");
  }
  GapPolicy p;
  p.mode = GapMode::kSelector;
  p.selector = std::move(s);
  p.vanish_tol = tol;
  return p;
}

GapPolicy GapPolicy::with_tol(double tol) const
{
  GapPolicy p = *this;
  p.vanish_tol = tol;
  return p;
}

GapCurve min_nonvanishing_gap(const SpectralBranches &branches, const GapPolicy &policy)
{
  const double tol = resolve_vanish_tol(policy.vanish_tol, branches.scale);
  const int n = branches.size();
  const auto rows = branches.values.rows();
  GapCurve out;
  out.grid = branches.grid;
  out.vanish_tol = tol;

  auto check = [&](const CVector &g) {
    if (g.cwiseAbs().minCoeff() <= tol)
    {
      throw Error(ErrorCode::kNoValidGap, "selected gap vanishes on the grid");
    }
  };

  switch (policy.mode)
  {
    case GapMode::kSelector:
    {
      if (!policy.selector)
      {
        throw Error(ErrorCode::kInvalidArgument, "selector mode without a selector");
      }
      out.values.resize(rows);
      for (Eigen::Index i = 0; i < rows; ++i)
      {
        const CVector row = branches.values.row(i).transpose();
        const auto [a, b] = policy.selector(row);
        out.values(i) = row(a) - row(b);
      }
      check(out.values);
      return out;
    }
    case GapMode::kExplicit:
    {
      if (policy.alpha < 0 || policy.alpha >= n || policy.beta < 0 || policy.beta >= n ||
          policy.alpha == policy.beta)
      {
        throw Error(ErrorCode::kInvalidArgument, "explicit gap pair out of range");
      }
      out.alpha = policy.alpha;
      out.beta = policy.beta;
      out.values = branches.values.col(policy.alpha) - branches.values.col(policy.beta);
      check(out.values);
      return out;
    }
    case GapMode::kAutomatic: break;
  }

  double best_min = std::numeric_limits<double>::infinity();
  double best_re = -1.0;
  int best_a = -1, best_b = -1;
  for (int a = 0; a < n; ++a)
  {
    for (int b = a + 1; b < n; ++b)
    {
      const CVector g = branches.values.col(a) - branches.values.col(b);
      Eigen::Index at = 0;
      const double m = g.cwiseAbs().minCoeff(&at);
      if (m <= tol)
      {
        continue;
      }
      const double re = std::abs(g(at).real());
      const double tie = 1e-12 * std::max(1.0, m);
      if (m < best_min - tie || (std::abs(m - best_min) <= tie && re > best_re + tie))
      {
        best_min = m;
        best_re = re;
        best_a = a;
        best_b = b;
      }
    }
  }
  if (best_a < 0)
  {
    throw Error(ErrorCode::kNoValidGap, "every eigenvalue gap vanishes somewhere on the grid");
  }
  if (branches.values(0, best_a).imag() < branches.values(0, best_b).imag())
  {
    std::swap(best_a, best_b);
  }
  out.alpha = best_a;
  out.beta = best_b;
  out.values = branches.values.col(best_a) - branches.values.col(best_b);
  return out;
}

JordanReport detect_jordan(const CMatrix &matrix, double tol)
{
  if (matrix.rows() != matrix.cols())
  {
    throw Error(ErrorCode::kShape, "detect_jordan needs a square matrix");
  }
  JordanReport report;
  if (matrix.size() == 0)
  {
    return report;
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(matrix, true);
  if (solver.info() != Eigen::Success)
  {
    report.condition = std::numeric_limits<double>::infinity();
    report.defective = true;
    return report;
  }
  CMatrix v = solver.eigenvectors();
  for (Eigen::Index c = 0; c < v.cols(); ++c)
  {
    const double nrm = v.col(c).norm();
    if (nrm > 0.0)
    {
      v.col(c) /= nrm;
    }
  }
  const Eigen::JacobiSVD<CMatrix> svd(v);
  const auto &sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  report.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  report.defective = !(report.condition <= 1.0 / tol);
  return report;
}

JordanReport detect_jordan(const Superoperator &superop, double tol)
{
  return detect_jordan(superop.matrix, tol);
}

GapFunction::GapFunction(Liouvillian liouvillian, const GapPolicy &policy,
                         const Schedule &reference, const std::vector<double> &grid)
  : liouvillian_(std::move(liouvillian))
{
  if (policy.mode == GapMode::kSelector)
  {
    if (!policy.selector)
    {
      throw Error(ErrorCode::kInvalidArgument, "selector mode without a selector");
    }
    selector_ = policy.selector;
    double scale = 0.0;
    for (double s : grid)
    {
      scale = std::max(scale, liouvillian_.at(reference.drives(s)).norm());
    }
    vanish_tol_ = resolve_vanish_tol(policy.vanish_tol, scale);
    return;
  }
  const SpectralBranches br = track_branches(liouvillian_, reference, grid);
  const GapCurve gap = min_nonvanishing_gap(br, policy);
  vanish_tol_ = gap.vanish_tol;
  seed_a_ = br.values(0, gap.alpha);
  seed_b_ = br.values(0, gap.beta);
  reset();
}

void GapFunction::reset()
{
  last_a_ = seed_a_;
  last_b_ = seed_b_;
}

cplx GapFunction::operator()(const RVector &q)
{
  const CVector v = eigenvalues(liouvillian_.at(q));
  const auto [a, b] = select(v);
  return v(a) - v(b);
}

std::pair<int, int> GapFunction::select(const CVector &v)
{
  if (selector_)
  {
    return selector_(v);
  }
  Eigen::Index a = 0;
  (v.array() - last_a_).abs().minCoeff(&a);
  Eigen::Index b = (a == 0) ? 1 : 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    if (i != a && std::abs(v(i) - last_b_) < std::abs(v(b) - last_b_))
    {
      b = i;
    }
  }
  last_a_ = v(a);
  last_b_ = v(b);
  return {static_cast<int>(a), static_cast<int>(b)};
}

}  // namespace qabos
