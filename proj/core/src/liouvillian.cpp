// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qabos
{

namespace
{

CMatrix unit(int d, int j, int k)
{
  CMatrix m = CMatrix::Zero(d, d);
  m(j, k) = 1.0;
  return m;
}

Eigen::Map<const CVector> as_vec(const CMatrix &m)
{
  return Eigen::Map<const CVector>(m.data(), m.size());
}

void require_square(const CMatrix &m, int d, const char *what)
{
  if (m.rows() != d || m.cols() != d)
  {
    throw Error(ErrorCode::kShape, std::string(what) + " must be " + std::to_string(d) + "x" +
                                       std::to_string(d));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// OperatorBasis
// ---------------------------------------------------------------------------

OperatorBasis::OperatorBasis(int dimension, double norm_const, std::vector<CMatrix> elements)
  : dimension_(dimension), norm_const_(norm_const), elements_(std::move(elements))
{
  if (dimension < 2)
  {
    throw Error(ErrorCode::kInvalidDimension, "basis dimension must be >= 2");
  }
  if (!(norm_const > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "basis norm constant must be positive");
  }
  const int n = dimension * dimension - 1;
  if (static_cast<int>(elements_.size()) != n)
  {
    throw Error(ErrorCode::kShape, "basis needs D^2-1 elements");
  }
  conj_rows_.resize(n, dimension * dimension);
  for (int i = 0; i < n; ++i)
  {
    require_square(elements_[static_cast<std::size_t>(i)], dimension, "basis element");
    conj_rows_.row(i) = as_vec(elements_[static_cast<std::size_t>(i)]).conjugate().transpose();
  }
}

double OperatorBasis::invariant_error() const
{
  double err = 0.0;
  const CMatrix gram = conj_rows_ * conj_rows_.adjoint();
  for (int i = 0; i < size(); ++i)
  {
    err = std::max(err, std::abs(elements_[static_cast<std::size_t>(i)].trace()));
    for (int j = 0; j < size(); ++j)
    {
      const double expected = (i == j) ? norm_const_ : 0.0;
      err = std::max(err, std::abs(gram(i, j) - expected));
    }
  }
  return err;
}

OperatorBasis gell_mann_basis(int d, double norm_const)
{
  if (d < 2)
  {
    throw Error(ErrorCode::kInvalidDimension, "basis dimension must be >= 2");
  }
  if (!(norm_const > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "basis norm constant must be positive");
  }
  const double scale = std::sqrt(norm_const / 2.0);
  std::vector<CMatrix> el;
  el.reserve(static_cast<std::size_t>(d * d - 1));
  for (int j = 0; j < d; ++j)
  {
    for (int k = j + 1; k < d; ++k)
    {
      el.push_back(scale * (unit(d, j, k) + unit(d, k, j)));
      el.push_back(scale * (-kI * unit(d, j, k) + kI * unit(d, k, j)));
    }
  }
  for (int l = 1; l < d; ++l)
  {
    CMatrix m = CMatrix::Zero(d, d);
    for (int j = 0; j < l; ++j)
    {
      m(j, j) = 1.0;
    }
    m(l, l) = -static_cast<double>(l);
    el.push_back(scale * std::sqrt(2.0 / (l * (l + 1.0))) * m);
  }
  return OperatorBasis(d, norm_const, std::move(el));
}

OperatorBasis make_basis(int d, double norm_const)
{
  if (d != 3)
  {
    return gell_mann_basis(d, norm_const);
  }
  if (!(norm_const > 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "basis norm constant must be positive");
  }
  const double scale = std::sqrt(norm_const / 2.0);
  const double r3 = std::sqrt(3.0);
  std::vector<CMatrix> el;
  CMatrix d1 = CMatrix::Zero(3, 3);
  d1(0, 0) = 1.0;
  d1(2, 2) = -1.0;
  CMatrix d2 = CMatrix::Zero(3, 3);
  d2(0, 0) = 1.0 / r3;
  d2(1, 1) = -2.0 / r3;
  d2(2, 2) = 1.0 / r3;
  el.push_back(scale * d1);
  el.push_back(scale * d2);
  for (auto [j, k] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
  {
    el.push_back(scale * (unit(3, j, k) + unit(3, k, j)));
    el.push_back(scale * (unit(3, j, k) - unit(3, k, j)));
  }
  return OperatorBasis(3, norm_const, std::move(el));
}

OperatorBasis pauli_product_basis(int qubits)
{
  if (qubits < 1 || qubits > 6)
  {
    throw Error(ErrorCode::kInvalidDimension, "pauli product basis supports 1..6 qubits");
  }
  const std::array<CMatrix, 4> paulis = [] {
    std::array<CMatrix, 4> p;
    p[0] = CMatrix::Identity(2, 2);
    p[1] = CMatrix::Zero(2, 2);
    p[1] << 0, 1, 1, 0;
    p[2] = CMatrix::Zero(2, 2);
    p[2] << 0, -kI, kI, 0;
    p[3] = CMatrix::Zero(2, 2);
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  const int words = 1 << (2 * qubits);
  const int d = 1 << qubits;
  std::vector<CMatrix> el;
  el.reserve(static_cast<std::size_t>(words - 1));
  for (int w = 1; w < words; ++w)
  {
    CMatrix m = CMatrix::Ones(1, 1);
    for (int q = 0; q < qubits; ++q)
    {
      const int letter = (w >> (2 * (qubits - 1 - q))) & 3;
      const CMatrix &p = paulis[static_cast<std::size_t>(letter)];
      CMatrix next(m.rows() * 2, m.cols() * 2);
      for (int r = 0; r < m.rows(); ++r)
      {
        for (int c = 0; c < m.cols(); ++c)
        {
          next.block(2 * r, 2 * c, 2, 2) = m(r, c) * p;
        }
      }
      m = std::move(next);
    }
    el.push_back(std::move(m));
  }
  return OperatorBasis(d, static_cast<double>(d), std::move(el));
}

// ---------------------------------------------------------------------------
// LindbladModel
// ---------------------------------------------------------------------------

LindbladModel LindbladModel::affine(OperatorBasis basis, CMatrix constant_term,
                                    std::vector<CMatrix> drive_terms,
                                    std::vector<Dissipator> dissipators)
{
  const int d = basis.dimension();
  require_square(constant_term, d, "constant Hamiltonian term");
  for (const auto &t : drive_terms)
  {
    require_square(t, d, "drive Hamiltonian term");
  }
  for (const auto &diss : dissipators)
  {
    require_square(diss.jump, d, "jump operator");
  }
  LindbladModel m;
  m.basis_ = std::make_shared<const OperatorBasis>(std::move(basis));
  m.drive_arity_ = static_cast<int>(drive_terms.size());
  m.affine_ = true;
  m.constant_ = std::move(constant_term);
  m.drive_terms_ = std::move(drive_terms);
  m.dissipators_ = std::move(dissipators);
  m.validate({});
  return m;
}

LindbladModel LindbladModel::general(OperatorBasis basis, int drive_arity,
                                     HamiltonianFn hamiltonian,
                                     std::vector<Dissipator> dissipators,
                                     HamiltonianDerivativeFn derivative)
{
  if (drive_arity < 0 || !hamiltonian)
  {
    throw Error(ErrorCode::kInvalidArgument, "general model needs a Hamiltonian callback");
  }
  for (const auto &diss : dissipators)
  {
    require_square(diss.jump, basis.dimension(), "jump operator");
  }
  LindbladModel m;
  m.basis_ = std::make_shared<const OperatorBasis>(std::move(basis));
  m.drive_arity_ = drive_arity;
  m.affine_ = false;
  m.hamiltonian_ = std::move(hamiltonian);
  m.derivative_ = std::move(derivative);
  m.dissipators_ = std::move(dissipators);
  m.validate({});
  return m;
}

CMatrix LindbladModel::hamiltonian(const RVector &q) const
{
  if (q.size() != drive_arity_)
  {
    throw Error(ErrorCode::kShape, "drive vector has wrong length");
  }
  if (!affine_)
  {
    CMatrix h = hamiltonian_(q);
    require_square(h, dimension(), "Hamiltonian");
    return h;
  }
  CMatrix h = constant_;
  for (int k = 0; k < drive_arity_; ++k)
  {
    h += q(k) * drive_terms_[static_cast<std::size_t>(k)];
  }
  return h;
}

CMatrix LindbladModel::hamiltonian_derivative(const RVector &q, int k) const
{
  if (q.size() != drive_arity_ || k < 0 || k >= drive_arity_)
  {
    throw Error(ErrorCode::kShape, "drive index or vector length out of range");
  }
  if (affine_)
  {
    return drive_terms_[static_cast<std::size_t>(k)];
  }
  if (derivative_)
  {
    CMatrix d = derivative_(q, k);
    require_square(d, dimension(), "Hamiltonian derivative");
    return d;
  }
  const double h = 1e-6 * std::max(1.0, std::abs(q(k)));
  RVector hi = q, lo = q;
  hi(k) += h;
  lo(k) -= h;
  return (hamiltonian(hi) - hamiltonian(lo)) / (2.0 * h);
}

const CMatrix &LindbladModel::constant_term() const
{
  if (!affine_)
  {
    throw Error(ErrorCode::kInvalidArgument, "constant term requested from a non-affine model");
  }
  return constant_;
}

const CMatrix &LindbladModel::drive_term(int k) const
{
  if (!affine_)
  {
    throw Error(ErrorCode::kInvalidArgument, "drive term requested from a non-affine model");
  }
  return drive_terms_.at(static_cast<std::size_t>(k));
}

LindbladModel LindbladModel::closed() const
{
  LindbladModel m = *this;
  m.dissipators_.clear();
  return m;
}

LindbladModel LindbladModel::with_rates_scaled(double factor) const
{
  if (!(factor >= 0.0))
  {
    throw Error(ErrorCode::kInvalidArgument, "rate scale factor must be >= 0");
  }
  LindbladModel m = *this;
  for (auto &d : m.dissipators_)
  {
    d.rate *= factor;
  }
  return m;
}

void LindbladModel::validate(const std::vector<RVector> &samples) const
{
  for (const auto &d : dissipators_)
  {
    if (!(d.rate >= 0.0) || !std::isfinite(d.rate))
    {
      throw Error(ErrorCode::kInvalidArgument, "dissipation rates must be finite and >= 0");
    }
  }
  auto check_hermitian = [](const CMatrix &h) {
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    {
      throw Error(ErrorCode::kInvalidArgument, "Hamiltonian is not Hermitian");
    }
  };
  if (affine_)
  {
    check_hermitian(constant_);
    for (const auto &t : drive_terms_)
    {
      check_hermitian(t);
    }
  }
  for (const auto &q : samples)
  {
    check_hermitian(hamiltonian(q));
  }
}

CMatrix apply_dissipator(const LindbladModel &model, const CMatrix &rho)
{
  const int d = model.dimension();
  require_square(rho, d, "operator");
  CMatrix out = CMatrix::Zero(d, d);
  for (const auto &diss : model.dissipators())
  {
    if (diss.rate == 0.0)
    {
      continue;
    }
    const CMatrix &l = diss.jump;
    const CMatrix ldl = l.adjoint() * l;
    out += diss.rate * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

CMatrix apply_generator(const LindbladModel &model, const RVector &q, const CMatrix &rho)
{
  require_square(rho, model.dimension(), "operator");
  const CMatrix h = model.hamiltonian(q);
  return -kI * (h * rho - rho * h) + apply_dissipator(model, rho);
}

// ---------------------------------------------------------------------------
// Coherence vectors
// ---------------------------------------------------------------------------

CVector CoherenceVector::full() const
{
  CVector out(components.size() + 1);
  out(0) = identity;
  out.tail(components.size()) = components;
  return out;
}

CoherenceVector CoherenceVector::from_full(const CVector &full)
{
  if (full.size() < 2)
  {
    throw Error(ErrorCode::kShape, "coherence vector too short");
  }
  return CoherenceVector{full(0), full.tail(full.size() - 1)};
}

CoherenceVector expand(const CMatrix &op, const OperatorBasis &basis)
{
  require_square(op, basis.dimension(), "operator");
  return CoherenceVector{op.trace(), basis.conjugate_rows() * as_vec(op)};
}

CoherenceVector vectorize(const CMatrix &rho, const OperatorBasis &basis)
{
  require_square(rho, basis.dimension(), "density matrix");
  if (std::abs(rho.trace() - 1.0) > 1e-10)
  {
    throw Error(ErrorCode::kTrace, "density matrix must have unit trace");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
  {
    throw Error(ErrorCode::kInvalidArgument, "density matrix must be Hermitian");
  }
  return expand(rho, basis);
}

CMatrix devectorize(const CoherenceVector &v, const OperatorBasis &basis)
{
  if (v.components.size() != basis.size())
  {
    throw Error(ErrorCode::kShape, "coherence vector length does not match basis");
  }
  const int d = basis.dimension();
  CMatrix rho = (v.identity / static_cast<double>(d)) * CMatrix::Identity(d, d);
  for (int n = 0; n < basis.size(); ++n)
  {
    rho += (v.components(n) / basis.norm_const()) * basis.element(n);
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Superoperators
// ---------------------------------------------------------------------------

bool is_unital(const LindbladModel &model, const RVector &)
{
  const int d = model.dimension();
  double scale = 1.0;
  for (const auto &diss : model.dissipators())
  {
    scale += diss.rate * hs_norm2(diss.jump);
  }
  const CMatrix image = apply_dissipator(model, CMatrix::Identity(d, d));
  return image.cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

Liouvillian::Liouvillian(LindbladModel model, SuperoperatorForm form) : model_(std::move(model))
{
  unital_ = is_unital(model_, RVector::Zero(model_.drive_arity()));
  switch (form)
  {
    case SuperoperatorForm::kFull: reduced_ = false; break;
    case SuperoperatorForm::kReduced:
      if (!unital_)
      {
        throw Error(ErrorCode::kNonUnital,
                    "reduced superoperator requested but the generator does not annihilate 1");
      }
      reduced_ = true;
      break;
    case SuperoperatorForm::kReducedIfUnital: reduced_ = unital_; break;
  }
  const LindbladModel &m = model_;
  dissipator_part_ =
      superoperator_of([&m](const CMatrix &x) { return apply_dissipator(m, x); }, true);
  if (model_.is_affine())
  {
    auto commutator = [](const CMatrix &h) {
      return [h](const CMatrix &x) -> CMatrix { return -kI * (h * x - x * h); };
    };
    constant_part_ = superoperator_of(commutator(model_.constant_term()), false);
    for (int k = 0; k < model_.drive_arity(); ++k)
    {
      drive_parts_.push_back(superoperator_of(commutator(model_.drive_term(k)), false));
    }
  }
}

int Liouvillian::side() const
{
  const int d = model_.dimension();
  return reduced_ ? d * d - 1 : d * d;
}

CMatrix Liouvillian::superoperator_of(const std::function<CMatrix(const CMatrix &)> &map,
                                      bool include_identity_column) const
{
  const OperatorBasis &basis = model_.basis();
  const int d = basis.dimension();
  const int n = basis.size();
  const CMatrix &rows = basis.conjugate_rows();
  const double inv_norm = 1.0 / basis.norm_const();

  CMatrix full = CMatrix::Zero(n + 1, n + 1);
  auto fill_column = [&](int col, const CMatrix &image, double weight) {
    full(0, col) = weight * image.trace();
    full.block(1, col, n, 1) = weight * (rows * as_vec(image));
  };
  if (include_identity_column)
  {
    fill_column(0, map(CMatrix::Identity(d, d)), 1.0 / d);
  }
  for (int l = 0; l < n; ++l)
  {
    fill_column(l + 1, map(basis.element(l)), inv_norm);
  }
  if (reduced_)
  {
    return full.bottomRightCorner(n, n);
  }
  return full;
}

CMatrix Liouvillian::hamiltonian_part(const RVector &q) const
{
  if (q.size() != model_.drive_arity())
  {
    throw Error(ErrorCode::kShape, "drive vector has wrong length");
  }
  if (model_.is_affine())
  {
    CMatrix out = constant_part_;
    for (int k = 0; k < model_.drive_arity(); ++k)
    {
      out += q(k) * drive_parts_[static_cast<std::size_t>(k)];
    }
    return out;
  }
  const CMatrix h = model_.hamiltonian(q);
  return superoperator_of([&h](const CMatrix &x) -> CMatrix { return -kI * (h * x - x * h); },
                          false);
}

CMatrix Liouvillian::at(const RVector &q) const
{
  return dissipator_part_ + hamiltonian_part(q);
}

CMatrix Liouvillian::drive_derivative(const RVector &q, int k) const
{
  if (k < 0 || k >= model_.drive_arity())
  {
    throw Error(ErrorCode::kShape, "drive index out of range");
  }
  if (model_.is_affine())
  {
    return drive_parts_[static_cast<std::size_t>(k)];
  }
  const CMatrix dh = model_.hamiltonian_derivative(q, k);
  return superoperator_of([&dh](const CMatrix &x) -> CMatrix { return -kI * (dh * x - x * dh); },
                          false);
}

Superoperator build_superoperator(const LindbladModel &model, const RVector &q,
                                  SuperoperatorForm form)
{
  const Liouvillian l(model, form);
  return Superoperator{l.at(q), 0.0, l.reduced()};
}

Superoperator superoperator_derivative(const Liouvillian &liouvillian, const Schedule &schedule,
                                       double s)
{
  if (!(s >= 0.0 && s <= 1.0))
  {
    throw Error(ErrorCode::kDomain, "schedule point outside [0, 1]");
  }
  const LindbladModel &model = liouvillian.model();
  if (schedule.drive_size() != model.drive_arity())
  {
    throw Error(ErrorCode::kShape, "schedule drive count does not match model");
  }
  if (model.has_exact_derivative())
  {
    const RVector rates = schedule.drive_rates(s);
    const RVector q = model.is_affine() ? RVector() : schedule.drives(s);
    const int side = liouvillian.side();
    CMatrix out = CMatrix::Zero(side, side);
    for (int k = 0; k < model.drive_arity(); ++k)
    {
      if (rates(k) != 0.0)
      {
        out += rates(k) * liouvillian.drive_derivative(q, k);
      }
    }
    return Superoperator{out, s, liouvillian.reduced()};
  }
  const double h = kSuperoperatorStep;
  const double lo = std::max(0.0, s - h);
  const double hi = std::min(1.0, s + h);
  const CMatrix d = (liouvillian.hamiltonian_part(schedule.drives(hi)) -
                     liouvillian.hamiltonian_part(schedule.drives(lo))) /
                    (hi - lo);
  return Superoperator{d, s, liouvillian.reduced()};
}

Superoperator superoperator_derivative(const LindbladModel &model, const Schedule &schedule,
                                       double s, SuperoperatorForm form)
{
  return superoperator_derivative(Liouvillian(model, form), schedule, s);
}

double hs_norm2(const CMatrix &a)
{
  return a.squaredNorm();
}

}  // namespace qabos
