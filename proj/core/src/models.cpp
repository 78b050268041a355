// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qabos
{

namespace
{

CMatrix ket_bra(int dim, int k, int j)
{
  CMatrix m = CMatrix::Zero(dim, dim);
  m(k, j) = 1.0;
  return m;
}

CMatrix projector(int dim, int k)
{
  return ket_bra(dim, k, k);
}

CMatrix pauli(char which)
{
  CMatrix m(2, 2);
  switch (which)
  {
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, -kI, kI, 0;
      break;
    default:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

// Single-qubit operator on qubit `k` of `n`, qubit 0 most significant.
CMatrix embed(const CMatrix &op, int k, int n)
{
  CMatrix out = CMatrix::Identity(1, 1);
  for (int i = 0; i < n; ++i)
  {
    const CMatrix f = (i == k) ? op : CMatrix::Identity(2, 2);
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
    {
      for (Eigen::Index c = 0; c < out.cols(); ++c)
      {
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
      }
    }
    out = std::move(next);
  }
  return out;
}

RVector vec(std::initializer_list<double> v)
{
  RVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v)
  {
    out(i++) = x;
  }
  return out;
}

void require_positive(double v, const char *what)
{
  if (!(v > 0.0) || !std::isfinite(v))
  {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be positive");
  }
}

void require_nonnegative(double v, const char *what)
{
  if (!(v >= 0.0) || !std::isfinite(v))
  {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be non-negative");
  }
}

CMatrix stirap_coupling(int which)
{
  return which == 0 ? CMatrix(ket_bra(3, 0, 1) + ket_bra(3, 1, 0))
                    : CMatrix(ket_bra(3, 1, 2) + ket_bra(3, 2, 1));
}

}  // namespace

LagrangianConfig ModelPreset::lagrangian_config(double tau) const
{
  LagrangianConfig cfg;
  cfg.tau = tau;
  cfg.gap = gap;
  return cfg;
}

ModelPreset with_constraint(ModelPreset preset, Constraint constraint, Boundary boundary)
{
  if (constraint.drive_size() != preset.model.drive_arity())
  {
    throw Error(ErrorCode::kShape, "constraint does not match the preset drive count");
  }
  if (boundary.start.size() != constraint.reduced_size() ||
      boundary.end.size() != constraint.reduced_size())
  {
    throw Error(ErrorCode::kShape, "boundary does not match the constraint");
  }
  preset.constraint = std::move(constraint);
  preset.boundary = std::move(boundary);
  preset.capabilities.brachistochrone = false;
  return preset;
}

ModelPreset qubit_dephasing(double omega0, double gamma)
{
  require_positive(omega0, "Omega_0");
  require_nonnegative(gamma, "gamma");
  std::vector<Dissipator> diss;
  diss.push_back({pauli('z'), gamma});
  ModelPreset p{
      "qubit-dephasing",
      LindbladModel::affine(make_basis(2), CMatrix::Zero(2, 2),
                            {0.5 * pauli('x'), 0.5 * pauli('y')}, std::move(diss)),
      sum_constraint(omega0),
      Boundary{vec({0.0}), vec({omega0})},
      GapPolicy::from_selector(conjugate_pair_selector()),
      {},
      {},
      {true, true, true, false},
      {}};
  // Ground state of H(0) = ½Ω_0σ_x is |−⟩; the target is the ground state of ½Ω_0σ_y.
  CMatrix minus(2, 1), minus_y(2, 1);
  minus << 1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2;
  minus_y << 1.0 / std::numbers::sqrt2, -kI / std::numbers::sqrt2;
  p.initial_state = minus * minus.adjoint();
  p.target_state = minus_y * minus_y.adjoint();
  return p;
}

ModelPreset qubit_dephasing_constant_power(double omega0, double gamma)
{
  ModelPreset p = with_constraint(qubit_dephasing(omega0, gamma),
                                  constant_power_constraint(omega0),
                                  Boundary{vec({0.0}), vec({0.5 * std::numbers::pi})});
  p.name = "qubit-dephasing-power";
  p.capabilities.brachistochrone = true;
  return p;
}

ModelPreset stirap_balanced(double omega0, double gamma)
{
  require_positive(omega0, "Omega_0");
  require_nonnegative(gamma, "Gamma");
  std::vector<Dissipator> diss;
  for (int n = 1; n <= 2; ++n)
  {
    diss.push_back({ket_bra(3, n - 1, n), gamma});
    diss.push_back({ket_bra(3, n, n - 1), gamma});
  }
  ModelPreset p{"stirap-balanced",
                LindbladModel::affine(make_basis(3), CMatrix::Zero(3, 3),
                                      {stirap_coupling(0), stirap_coupling(1)}, std::move(diss)),
                sum_constraint(omega0),
                Boundary{vec({omega0}), vec({0.0})},
                GapPolicy::from_selector(conjugate_pair_selector()),
                projector(3, 0),
                projector(3, 2),
                {true, true, true, true},
                {}};
  return p;
}

ModelPreset stirap_balanced_constant_power(double omega0, double gamma)
{
  ModelPreset p = with_constraint(stirap_balanced(omega0, gamma),
                                  constant_power_constraint(omega0),
                                  Boundary{vec({0.5 * std::numbers::pi}), vec({0.0})});
  p.name = "stirap-balanced-power";
  p.capabilities.brachistochrone = true;
  return p;
}

RVector deutsch_jozsa_oracle(const std::vector<int> &truth_table)
{
  RVector o(static_cast<Eigen::Index>(truth_table.size()));
  for (std::size_t j = 0; j < truth_table.size(); ++j)
  {
    if (truth_table[j] != 0 && truth_table[j] != 1)
    {
      throw Error(ErrorCode::kInvalidArgument, "truth table entries must be 0 or 1");
    }
    o(static_cast<Eigen::Index>(j)) = truth_table[j] ? -1.0 : 1.0;
  }
  return o;
}

ModelPreset deutsch_jozsa(int qubits, double omega, double gamma,
                          const std::vector<int> &truth_table, PromiseCheck promise)
{
  if (qubits < 1 || qubits > 6)
  {
    throw Error(ErrorCode::kInvalidDimension, "Deutsch-Jozsa preset supports 1 to 6 qubits");
  }
  require_positive(omega, "omega");
  require_nonnegative(gamma, "gamma");
  const int dim = 1 << qubits;
  if (static_cast<int>(truth_table.size()) != dim)
  {
    throw Error(ErrorCode::kShape, "truth table needs 2^N entries");
  }
  const RVector oracle = deutsch_jozsa_oracle(truth_table);

  std::vector<std::string> warnings;
  const auto ones = std::count(truth_table.begin(), truth_table.end(), 1);
  const bool constant = ones == 0 || ones == dim;
  const bool balanced = 2 * ones == dim;
  if (!constant && !balanced)
  {
    if (promise == PromiseCheck::kStrict)
    {
      throw Error(ErrorCode::kInvalidPromise, "function is neither constant nor balanced");
    }
    warnings.emplace_back("function is neither constant nor balanced");
  }
  if (constant)
  {
    warnings.emplace_back("constant oracle: H(s) is stationary and the problem is degenerate");
  }

  CMatrix h0 = CMatrix::Zero(dim, dim);
  std::vector<Dissipator> diss;
  for (int k = 0; k < qubits; ++k)
  {
    h0 -= omega * embed(pauli('x'), k, qubits);
    diss.push_back({embed(pauli('z'), k, qubits), gamma});
  }
  auto hamiltonian = [h0, oracle](const RVector &r) {
    const double phase = 0.5 * std::numbers::pi * r(0);
    CMatrix h = h0;
    for (Eigen::Index j = 0; j < h.rows(); ++j)
    {
      for (Eigen::Index k = 0; k < h.cols(); ++k)
      {
        if (h(j, k) != 0.0)
        {
          h(j, k) *= std::exp(kI * phase * (oracle(j) - oracle(k)));
        }
      }
    }
    return h;
  };

  auto derivative = [hamiltonian, oracle](const RVector &r, int) {
    CMatrix h = hamiltonian(r);
    for (Eigen::Index j = 0; j < h.rows(); ++j)
    {
      for (Eigen::Index k = 0; k < h.cols(); ++k)
      {
        h(j, k) *= kI * 0.5 * std::numbers::pi * (oracle(j) - oracle(k));
      }
    }
    return h;
  };

  // Ground state of H(0) is |+⟩^⊗N.
  const CMatrix plus = CMatrix::Constant(dim, dim, 1.0 / dim);
  // Final ground state U(1)|+⟩^⊗N.
  CVector u1(dim);
  for (int j = 0; j < dim; ++j)
  {
    u1(j) = std::exp(kI * 0.5 * std::numbers::pi * oracle(j)) / std::sqrt(double(dim));
  }

  ModelPreset p{"deutsch-jozsa",
                LindbladModel::general(pauli_product_basis(qubits), 1, hamiltonian, std::move(diss),
                                       derivative),
                Constraint::identity(1),
                Boundary{vec({0.0}), vec({1.0})},
                GapPolicy::from_selector(conjugate_pair_selector()),
                plus,
                u1 * u1.adjoint(),
                {qubits == 2, true, true, false},
                std::move(warnings)};
  return p;
}

ModelPreset transmon_qutrit(double omega0, const RMatrix &relaxation, const RVector &dephasing)
{
  require_positive(omega0, "Omega_0");
  if (relaxation.rows() != 3 || relaxation.cols() != 3 || dephasing.size() != 3)
  {
    throw Error(ErrorCode::kShape, "transmon rates need a 3x3 relaxation matrix and 3 dephasing rates");
  }
  std::vector<Dissipator> diss;
  for (int k = 0; k < 3; ++k)
  {
    for (int j = 0; j < 3; ++j)
    {
      if (k == j)
      {
        continue;
      }
      require_nonnegative(relaxation(k, j), "relaxation rate");
      if (std::abs(relaxation(k, j) - relaxation(j, k)) >
          1e-12 * std::max(1.0, std::abs(relaxation(k, j))))
      {
        throw Error(ErrorCode::kSymmetry, "relaxation rates must satisfy Gamma_kj = Gamma_jk");
      }
      if (relaxation(k, j) > 0.0)
      {
        diss.push_back({ket_bra(3, k, j), relaxation(k, j)});
      }
    }
  }
  for (int j = 0; j < 3; ++j)
  {
    require_nonnegative(dephasing(j), "dephasing rate");
    if (dephasing(j) > 0.0)
    {
      diss.push_back({projector(3, j), dephasing(j)});
    }
  }
  ModelPreset p{"transmon-qutrit",
                LindbladModel::affine(make_basis(3), CMatrix::Zero(3, 3),
                                      {omega0 * stirap_coupling(0), omega0 * stirap_coupling(1)},
                                      std::move(diss)),
                sum_constraint(1.0),
                Boundary{vec({0.0}), vec({1.0})},
                GapPolicy::from_selector(conjugate_pair_selector()),
                projector(3, 2),
                projector(3, 0),
                {false, false, false, false},
                {}};
  return p;
}

std::vector<std::string> preset_names()
{
  return {"qubit-dephasing", "qubit-dephasing-power", "stirap-balanced", "stirap-balanced-power",
          "deutsch-jozsa", "transmon-qutrit"};
}

ModelPreset make_preset(const std::string &name, const PresetParams &params)
{
  if (name == "qubit-dephasing")
  {
    return qubit_dephasing(params.omega0, params.gamma);
  }
  if (name == "qubit-dephasing-power")
  {
    return qubit_dephasing_constant_power(params.omega0, params.gamma);
  }
  if (name == "stirap-balanced")
  {
    return stirap_balanced(params.omega0, params.gamma);
  }
  if (name == "stirap-balanced-power")
  {
    return stirap_balanced_constant_power(params.omega0, params.gamma);
  }
  if (name == "deutsch-jozsa")
  {
    std::vector<int> table = params.truth_table;
    if (table.empty())
    {
      const int dim = 1 << std::clamp(params.qubits, 1, 6);
      table.assign(static_cast<std::size_t>(dim), 0);
      std::fill(table.begin() + dim / 2, table.end(), 1);
    }
    return deutsch_jozsa(params.qubits, params.omega0, params.gamma, table, params.promise);
  }
  if (name == "transmon-qutrit")
  {
    RMatrix rel = RMatrix::Zero(3, 3);
    rel(0, 1) = rel(1, 0) = rel(1, 2) = rel(2, 1) = params.relaxation;
    RVector dep = RVector::Zero(3);
    dep(1) = dep(2) = params.dephasing;
    return transmon_qutrit(params.omega0, rel, dep);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown model preset '" + name + "'");
}

}  // namespace qabos
