// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

namespace qabos
{

namespace odeint = boost::numeric::odeint;

namespace
{

using State = std::vector<double>;

void pack(const CVector &v, State &out)
{
  out.resize(static_cast<std::size_t>(2 * v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    out[static_cast<std::size_t>(2 * i)] = v(i).real();
    out[static_cast<std::size_t>(2 * i + 1)] = v(i).imag();
  }
}

CVector unpack(const State &x)
{
  const auto n = static_cast<Eigen::Index>(x.size() / 2);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    v(i) = cplx(x[static_cast<std::size_t>(2 * i)], x[static_cast<std::size_t>(2 * i + 1)]);
  }
  return v;
}

void check_state(const CMatrix &rho, const PropagationOptions &opts, double s)
{
  if (!rho.allFinite())
  {
    throw Error(ErrorCode::kStateValidity, "non-finite state at s=" + std::to_string(s));
  }
  if (std::abs(rho.trace() - 1.0) > opts.trace_tol)
  {
    throw Error(ErrorCode::kStateValidity, "trace drift at s=" + std::to_string(s));
  }
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -opts.positivity_tol)
  {
    throw Error(ErrorCode::kStateValidity, "positivity lost at s=" + std::to_string(s));
  }
}

Trajectory propagate(const Liouvillian &l, const Schedule &schedule, double tau,
                     const CMatrix &rho0, const PropagationOptions &opts,
                     const std::vector<double> &grid)
{
  if (!(tau > 0.0) || !std::isfinite(tau))
  {
    throw Error(ErrorCode::kInvalidArgument, "tau must be positive");
  }
  const OperatorBasis &basis = l.model().basis();
  const CoherenceVector v0 = vectorize(rho0, basis);
  const bool reduced = l.reduced();
  State x;
  pack(reduced ? v0.components : v0.full(), x);

  auto system = [&](const State &y, State &dydt, double s) {
    const CVector v = unpack(y);
    const CVector dv = tau * (l.at(schedule.drives(std::clamp(s, 0.0, 1.0))) * v);
    pack(dv, dydt);
  };

  Trajectory out;
  out.tau = tau;
  auto observer = [&](const State &y, double s) {
    const CVector v = unpack(y);
    CoherenceVector cv = reduced ? CoherenceVector{1.0, v} : CoherenceVector::from_full(v);
    CMatrix rho = devectorize(cv, basis);
    check_state(rho, opts, s);
    out.times.push_back(s);
    out.states.push_back(std::move(rho));
  };

  try
  {
    auto stepper =
        odeint::make_dense_output(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, system, x, grid.begin(), grid.end(), 1e-3 / (1.0 + tau),
                            observer, odeint::max_step_checker(opts.max_steps));
  }
  catch (const odeint::odeint_error &e)
  {
    throw Error(ErrorCode::kStiffness,
                std::string("step size collapsed; reduce tau times the rates (") + e.what() + ")");
  }
  return out;
}

}  // namespace

Trajectory integrate_master_equation(const Liouvillian &liouvillian, const Schedule &schedule,
                                     double tau, const CMatrix &rho0,
                                     const PropagationOptions &options)
{
  if (options.points < 2)
  {
    throw Error(ErrorCode::kInvalidArgument, "need at least two output points");
  }
  return propagate(liouvillian, schedule, tau, rho0, options, uniform_grid(options.points));
}

CMatrix propagate_to_end(const Liouvillian &liouvillian, const Schedule &schedule, double tau,
                         const CMatrix &rho0, const PropagationOptions &options)
{
  return propagate(liouvillian, schedule, tau, rho0, options, {0.0, 1.0}).states.back();
}

CMatrix psd_sqrt(const CMatrix &rho)
{
  if (rho.rows() != rho.cols())
  {
    throw Error(ErrorCode::kShape, "state must be square");
  }
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  RVector w = es.eigenvalues();
  if (w.minCoeff() < -1e-10)
  {
    throw Error(ErrorCode::kStateValidity, "state has a negative eigenvalue below -1e-10");
  }
  w = w.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double infidelity(const CMatrix &rho_f, const CMatrix &rho)
{
  if (rho_f.rows() != rho.rows() || rho_f.cols() != rho.cols())
  {
    throw Error(ErrorCode::kShape, "states differ in dimension");
  }
  const CMatrix sf = psd_sqrt(rho_f);
  psd_sqrt(rho);
  const CMatrix m = sf * rho * sf;
  const CMatrix herm = 0.5 * (m + m.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  const RVector w = es.eigenvalues();
  if (w.minCoeff() < -1e-10)
  {
    throw Error(ErrorCode::kStateValidity, "fidelity operator is not positive");
  }
  const double f = w.cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(1.0 - f, 0.0, 1.0);
}

double trace_distance(const CMatrix &rho1, const CMatrix &rho2)
{
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols())
  {
    throw Error(ErrorCode::kShape, "states differ in dimension");
  }
  const Eigen::JacobiSVD<CMatrix> svd(rho1 - rho2);
  return 0.5 * svd.singularValues().sum();
}

namespace
{

void validate_scan(const ScanOptions &o)
{
  if (!(o.tau_min > 0.0) || !(o.tau_max > o.tau_min) || o.points < 2 || !(o.rel_tol > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "invalid tau scan options");
  }
}

std::vector<double> log_grid(const ScanOptions &o)
{
  std::vector<double> g(static_cast<std::size_t>(o.points));
  const double a = std::log(o.tau_min), b = std::log(o.tau_max);
  for (int i = 0; i < o.points; ++i)
  {
    g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (o.points - 1));
  }
  g.front() = o.tau_min;
  g.back() = o.tau_max;
  return g;
}

void evaluate_block(const InfidelityCurve &curve, const std::vector<double> &taus,
                    std::vector<double> &values, std::size_t begin, std::size_t end, int threads)
{
  const auto nt = static_cast<std::size_t>(std::max(1, threads));
  if (nt == 1)
  {
    for (std::size_t i = begin; i < end; ++i)
    {
      values[i] = curve(taus[i]);
    }
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  for (std::size_t t = 0; t < nt; ++t)
  {
    pool.emplace_back([&, t] {
      try
      {
        for (std::size_t i = begin + t; i < end; i += nt)
        {
          values[i] = curve(taus[i]);
        }
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
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace

std::vector<std::pair<double, double>> sample_infidelity(const InfidelityCurve &curve,
                                                         const ScanOptions &options)
{
  validate_scan(options);
  const std::vector<double> taus = log_grid(options);
  std::vector<double> values(taus.size());
  evaluate_block(curve, taus, values, 0, taus.size(), options.threads);
  std::vector<std::pair<double, double>> out;
  out.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i)
  {
    out.emplace_back(taus[i], values[i]);
  }
  return out;
}

double time_to_infidelity(const InfidelityCurve &curve, double target, const ScanOptions &options)
{
  validate_scan(options);
  if (!(target > 0.0 && target <= 1.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "target infidelity must lie in (0, 1]");
  }
  const std::vector<double> taus = log_grid(options);
  std::vector<double> values(taus.size());
  const std::size_t block = static_cast<std::size_t>(std::max(1, options.threads)) * 4;
  std::size_t hit = taus.size();
  for (std::size_t b = 0; b < taus.size() && hit == taus.size(); b += block)
  {
    const std::size_t e = std::min(taus.size(), b + block);
    evaluate_block(curve, taus, values, b, e, options.threads);
    for (std::size_t i = b; i < e; ++i)
    {
      if (values[i] <= target)
      {
        hit = i;
        break;
      }
    }
  }
  if (hit == taus.size())
  {
    throw Error(ErrorCode::kUnreachableInfidelity,
                "infidelity stays above the target up to tau=" + std::to_string(options.tau_max));
  }
  if (hit == 0)
  {
    return taus[0];
  }
  double lo = taus[hit - 1], hi = taus[hit];
  while (hi - lo > options.rel_tol * hi)
  {
    const double mid = std::sqrt(lo * hi);
    if (curve(mid) <= target)
    {
      hi = mid;
    }
    else
    {
      lo = mid;
    }
  }
  return hi;
}

double gain(const InfidelityCurve &candidate, const InfidelityCurve &baseline, double target,
            const ScanOptions &options)
{
  const double ta = time_to_infidelity(candidate, target, options);
  const double tb = time_to_infidelity(baseline, target, options);
  return tb / ta - 1.0;
}

InfidelityCurve exact_infidelity_curve(Liouvillian liouvillian, Schedule schedule, CMatrix rho0,
                                       std::function<CMatrix(double)> target,
                                       PropagationOptions options)
{
  if (!target)
  {
    throw Error(ErrorCode::kInvalidArgument, "target state function is empty");
  }
  return [l = std::move(liouvillian), sch = std::move(schedule), r0 = std::move(rho0),
          target = std::move(target), options](double tau) {
    return infidelity(target(tau), propagate_to_end(l, sch, tau, r0, options));
  };
}

// ---------------------------------------------------------------------------
// StirapAdiabatic
// ---------------------------------------------------------------------------

namespace
{

constexpr double kSqrt3 = 1.7320508075688772;

cplx integrate_complex(const std::function<cplx(double)> &f, double a, double b)
{
  if (a == b)
  {
    return 0.0;
  }
  using boost::math::quadrature::gauss_kronrod;
  const double sign = (b < a) ? -1.0 : 1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double re =
      gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).real(); }, lo, hi, 15, 1e-13);
  const double im =
      gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).imag(); }, lo, hi, 15, 1e-13);
  return sign * cplx(re, im);
}

void check_channel(int n)
{
  if (n < 0 || n > 2)
  {
    throw Error(ErrorCode::kInvalidArgument, "adiabatic channel must be 0, 1 or 2");
  }
}

}  // namespace

StirapAdiabatic::StirapAdiabatic(double gamma, double omega0, Schedule schedule)
  : gamma_(gamma), omega0_(omega0), schedule_(std::move(schedule))
{
  if (!(omega0 > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "Omega_0 must be positive");
  }
  if (!(gamma > 0.0))
  {
    throw Error(ErrorCode::kSingularConstant, "closed-form constants need Gamma > 0");
  }
  const double w2 = omega0 * omega0, g2 = gamma * gamma;
  if (std::abs(16.0 * w2 - 3.0 * g2) <= 1e-12 * (16.0 * w2 + 3.0 * g2) ||
      std::abs(g2 - 4.0 * w2) <= 1e-12 * (g2 + 4.0 * w2))
  {
    throw Error(ErrorCode::kSingularConstant, "closed-form constants are singular");
  }
  if (schedule_.drive_size() != 2)
  {
    throw Error(ErrorCode::kShape, "STIRAP schedule needs two drives");
  }
  const auto f0 = fractions(0.0);
  if (std::abs(f0[0]) > 1e-12 || std::abs(f0[1] - 1.0) > 1e-12)
  {
    throw Error(ErrorCode::kInvalidArgument, "schedule must start at (Omega_p, Omega_s) = (0, Omega_0)");
  }
  for (int n = 0; n < 3; ++n)
  {
    lambda_end_[static_cast<std::size_t>(n)] = lambda_integral(n, 1.0);
    theta_end_[static_cast<std::size_t>(n)] = phase_integral(n, 1.0);
  }
}

std::array<double, 2> StirapAdiabatic::fractions(double s) const
{
  const RVector q = schedule_.drives(s);
  return {q(0) / omega0_, q(1) / omega0_};
}

cplx StirapAdiabatic::eigenvalue(int channel, double s) const
{
  check_channel(channel);
  if (channel == 0)
  {
    return -1.5 * gamma_;
  }
  const auto f = fractions(s);
  const double fl = f[0] * f[0] + f[1] * f[1];
  const cplx r = std::sqrt(cplx(gamma_ * gamma_ - 4.0 * omega0_ * omega0_ * fl, 0.0));
  return channel == 1 ? -2.0 * gamma_ - r : -2.0 * gamma_ + r;
}

CVector StirapAdiabatic::eigenvector(int channel, double s) const
{
  check_channel(channel);
  const auto f = fractions(s);
  const double a = f[0], b = f[1];
  const double fl = a * a + b * b, fm = a * a - b * b;
  const double w = omega0_, g = gamma_;
  CVector d = CVector::Zero(8);
  d(3) = -a;
  d(7) = b;
  if (channel == 0)
  {
    d(0) = 2.0 * kI * w * fm / g;
    d(1) = -2.0 * kI * w * fl / (kSqrt3 * g);
    d(4) = 4.0 * kI * w * a * b / g;
    return d;
  }
  const cplx r = std::sqrt(cplx(g * g - 4.0 * w * w * fl, 0.0));
  const cplx gx = channel == 1 ? g + r : g - r;
  d(0) = kI * w * fm / gx;
  d(1) = -kI * kSqrt3 * gx / (4.0 * w);
  d(4) = 2.0 * kI * w * a * b / gx;
  return d;
}

namespace
{

// ϑ_n = h_n(f₊) f₊'.
cplx phase_kernel(int channel, double u, double g, double w)
{
  const double w2 = w * w, g2 = g * g;
  if (channel == 0)
  {
    return (32.0 * w2 * u - 3.0 * g2) / (2.0 * u * (16.0 * w2 * u - 3.0 * g2));
  }
  const cplx r = std::sqrt(cplx(g2 - 4.0 * w2 * u, 0.0));
  const double sign = channel == 1 ? 1.0 : -1.0;
  return w2 * (sign * 2.0 * g * r + (32.0 * w2 * u - 7.0 * g2)) /
         ((g2 - 4.0 * w2 * u) * (3.0 * g2 - 16.0 * w2 * u));
}

}  // namespace

cplx StirapAdiabatic::phase_rate(int channel, double s) const
{
  check_channel(channel);
  const auto f = fractions(s);
  const RVector rate = schedule_.drive_rates(s) / omega0_;
  const double fl = f[0] * f[0] + f[1] * f[1];
  const double dfl = 2.0 * f[0] * rate(0) + 2.0 * f[1] * rate(1);
  return phase_kernel(channel, fl, gamma_, omega0_) * dfl;
}

cplx StirapAdiabatic::constant(int channel) const
{
  check_channel(channel);
  const double w = omega0_, g = gamma_;
  const double den = 16.0 * w * w - 3.0 * g * g;
  if (channel == 0)
  {
    return 8.0 * kI * g * w / den;
  }
  const cplx root = std::sqrt(cplx(g * g - 4.0 * w * w, 0.0));
  const double sign = channel == 1 ? -1.0 : 1.0;
  return -2.0 * kI * g * w / den * (2.0 + sign * g / root);
}

cplx StirapAdiabatic::lambda_integral(int channel, double s) const
{
  check_channel(channel);
  if (channel == 0)
  {
    return -1.5 * gamma_ * s;
  }
  return integrate_complex([&](double x) { return eigenvalue(channel, x); }, 0.0, s);
}

cplx StirapAdiabatic::phase_integral(int channel, double s) const
{
  check_channel(channel);
  const auto f0 = fractions(0.0);
  const auto f1 = fractions(s);
  const double u0 = f0[0] * f0[0] + f0[1] * f0[1];
  const double u1 = f1[0] * f1[0] + f1[1] * f1[1];
  return integrate_complex(
      [&](double u) { return phase_kernel(channel, u, gamma_, omega0_); }, u0, u1);
}

CVector StirapAdiabatic::coherence(double s, double tau) const
{
  if (!(s >= 0.0 && s <= 1.0))
  {
    throw Error(ErrorCode::kDomain, "adiabatic state requested outside [0, 1]");
  }
  CVector v = CVector::Zero(8);
  for (int n = 0; n < 3; ++n)
  {
    const cplx ex = (s == 1.0)
                        ? tau * lambda_end_[static_cast<std::size_t>(n)] -
                              theta_end_[static_cast<std::size_t>(n)]
                        : tau * lambda_integral(n, s) - phase_integral(n, s);
    v += constant(n) * std::exp(ex) * eigenvector(n, s);
  }
  return v;
}

CMatrix StirapAdiabatic::density(double s, double tau) const
{
  static const OperatorBasis basis = make_basis(3, 2.0);
  return devectorize(CoherenceVector{1.0, coherence(s, tau)}, basis);
}

CMatrix StirapAdiabatic::final_density(double tau) const
{
  return density(1.0, tau);
}

}  // namespace qabos
