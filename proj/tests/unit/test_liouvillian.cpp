// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qabos/liouvillian.hpp"
#include "qabos/models.hpp"

namespace qabos
{
namespace
{

namespace ot = qabos::testing;

std::vector<Dissipator> random_dissipators(int d, std::mt19937_64 &rng)
{
  std::vector<Dissipator> out;
  for (int k = 0; k < 2; ++k) {
    CMatrix jump = ot::random_hermitian(d, rng) + kI * ot::random_hermitian(d, rng);
    out.push_back({jump, 0.25 * (k + 1)});
  }
  return out;
}

TEST(OperatorBasis, DefaultBasesAreOrthogonal)
{
  for (int d = 2; d <= 6; ++d) {
    const OperatorBasis b = make_basis(d);
    EXPECT_EQ(b.size(), d * d - 1);
    EXPECT_LT(b.invariant_error(), 1e-13) << "D = " << d;
  }
  EXPECT_LT(pauli_product_basis(3).invariant_error(), 1e-12);
  EXPECT_DOUBLE_EQ(pauli_product_basis(3).norm_const(), 8.0);
}

TEST(OperatorBasis, QutritTableOrder)
{
  const OperatorBasis b = make_basis(3);
  EXPECT_NEAR(b.element(0)(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(b.element(0)(2, 2).real(), -1.0, 1e-15);
  EXPECT_NEAR(b.element(1)(1, 1).real(), -2.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(b.element(3)(0, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(b.element(3)(1, 0).real(), -1.0, 1e-15);
  EXPECT_NEAR(b.element(7)(2, 1).real(), -1.0, 1e-15);
}

TEST(OperatorBasis, RejectsBadDimension)
{
  EXPECT_THROW(make_basis(1), Error);
  EXPECT_THROW(pauli_product_basis(0), Error);
}

TEST(Vectorization, RoundTrip)
{
  std::mt19937_64 rng(1);
  for (int d = 2; d <= 5; ++d) {
    const OperatorBasis basis = make_basis(d);
    for (int i = 0; i < 20; ++i) {
      const CMatrix rho = ot::random_density(d, rng);
      const CMatrix back = devectorize(vectorize(rho, basis), basis);
      EXPECT_LT((back - rho).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(Vectorization, RejectsNonStates)
{
  const OperatorBasis basis = make_basis(2);
  CMatrix rho = CMatrix::Identity(2, 2);
  EXPECT_THROW(vectorize(rho, basis), Error);
  rho = 0.5 * CMatrix::Identity(2, 2);
  rho(0, 1) = cplx(0.0, 0.1);
  EXPECT_THROW(vectorize(rho, basis), Error);
  EXPECT_THROW(vectorize(CMatrix::Identity(3, 3) / 3.0, basis), Error);
}

TEST(Superoperator, MatchesKroneckerConstruction)
{
  std::mt19937_64 rng(2);
  for (int d = 2; d <= 4; ++d) {
    const CMatrix h0 = ot::random_hermitian(d, rng);
    const CMatrix h1 = ot::random_hermitian(d, rng);
    const auto diss = random_dissipators(d, rng);
    const LindbladModel model = LindbladModel::affine(make_basis(d), h0, {h1}, diss);
    RVector q(1);
    q << 0.7;
    std::vector<CMatrix> jumps;
    std::vector<double> rates;
    for (const auto &x : diss) {
      jumps.push_back(x.jump);
      rates.push_back(x.rate);
    }
    const CMatrix kron = ot::kronecker_lindbladian(h0 + 0.7 * h1, jumps, rates);
    std::vector<CMatrix> elements{CMatrix::Identity(d, d)};
    for (const auto &e : model.basis().elements()) elements.push_back(e);
    CMatrix expected = ot::coherence_matrix(kron, elements, 2.0);
    expected.col(0) *= 2.0 / d;
    const CMatrix got = Liouvillian(model, SuperoperatorForm::kFull).at(q);
    EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-12) << "D = " << d;
  }
}

TEST(Superoperator, QubitDephasingMatrix)
{
  const auto preset = qubit_dephasing(1.0, 0.3);
  RVector q(2);
  q << 0.4, -1.1;
  const CMatrix got = Liouvillian(preset.model, SuperoperatorForm::kFull).at(q);
  EXPECT_LT((got - ot::qubit_superoperator(0.4, -1.1, 0.3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Superoperator, ReducedFormRequiresUnital)
{
  CMatrix decay = CMatrix::Zero(2, 2);
  decay(0, 1) = 1.0;
  const LindbladModel model =
    LindbladModel::affine(make_basis(2), CMatrix::Zero(2, 2), {}, {{decay, 0.5}});
  EXPECT_FALSE(is_unital(model, RVector()));
  EXPECT_THROW(Liouvillian(model, SuperoperatorForm::kReduced), Error);
  EXPECT_EQ(Liouvillian(model).side(), 4);
}

TEST(Superoperator, DriveDerivativeOfGeneralModel)
{
  std::mt19937_64 rng(3);
  const CMatrix h0 = ot::random_hermitian(3, rng);
  const CMatrix h1 = ot::random_hermitian(3, rng);
  const auto affine = LindbladModel::affine(make_basis(3), h0, {h1}, {});
  const auto general = LindbladModel::general(
    make_basis(3), 1, [=](const RVector &q) -> CMatrix { return h0 + q(0) * h1; }, {});
  RVector q(1);
  q << 0.2;
  const CMatrix a = Liouvillian(affine).drive_derivative(q, 0);
  const CMatrix b = Liouvillian(general).drive_derivative(q, 0);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Superoperator, GeneratorCommutation)
{
  std::mt19937_64 rng(4);
  for (int d = 2; d <= 4; ++d) {
    const LindbladModel model = LindbladModel::affine(
      make_basis(d), ot::random_hermitian(d, rng), {ot::random_hermitian(d, rng)},
      random_dissipators(d, rng));
    const Liouvillian l(model, SuperoperatorForm::kFull);
    RVector q(1);
    q << -0.4;
    const CMatrix rho = ot::random_density(d, rng);
    const CVector lhs = l.at(q) * expand(rho, model.basis()).full();
    const CVector rhs = expand(apply_generator(model, q, rho), model.basis()).full();
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LindbladModel, ValidationCatchesBadInput)
{
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(LindbladModel::affine(make_basis(2), h, {}, {}), Error);
  EXPECT_THROW(LindbladModel::affine(make_basis(2), CMatrix::Zero(2, 2), {},
                                     {{CMatrix::Identity(2, 2), -1.0}}),
               Error);
  const auto general = LindbladModel::general(
    make_basis(2), 1, [h](const RVector &) -> CMatrix { return h; }, {});
  EXPECT_THROW(general.validate({RVector::Zero(1)}), Error);
}

TEST(LindbladModel, ClosedDropsDissipators)
{
  const auto preset = qubit_dephasing(1.0, 0.2);
  EXPECT_TRUE(preset.model.closed().dissipators().empty());
  EXPECT_DOUBLE_EQ(preset.model.with_rates_scaled(2.0).dissipators()[0].rate, 0.4);
}

}  // namespace
}  // namespace qabos
