// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qabos/model_io.hpp"
#include "qabos/models.hpp"
#include "qabos/spectral.hpp"

namespace qabos
{
namespace
{

namespace ot = qabos::testing;

TEST(Presets, AllNamesBuild)
{
  PresetParams params;
  params.gamma = 0.1;
  params.relaxation = 0.01;
  params.dephasing = 0.01;
  for (const auto &name : preset_names()) {
    const ModelPreset p = make_preset(name, params);
    EXPECT_EQ(p.name, name);
    EXPECT_EQ(p.initial_state.rows(), p.model.dimension());
    EXPECT_NEAR(p.initial_state.trace().real(), 1.0, 1e-14);
    EXPECT_NEAR(p.target_state.trace().real(), 1.0, 1e-14);
  }
  EXPECT_THROW(make_preset("no-such-model", params), Error);
}

TEST(Presets, QubitBoundaryDrives)
{
  const auto p = qubit_dephasing(2.0, 0.1);
  const Schedule s = p.linear_schedule();
  EXPECT_NEAR(s.drives(0.0)(0), 2.0, 1e-15);
  EXPECT_NEAR(s.drives(0.0)(1), 0.0, 1e-15);
  EXPECT_NEAR(s.drives(1.0)(0), 0.0, 1e-15);
  EXPECT_NEAR(s.drives(1.0)(1), 2.0, 1e-15);
}

TEST(Presets, StirapBoundaryDrives)
{
  const auto p = stirap_balanced(1.0, 0.1);
  const Schedule s = p.linear_schedule();
  EXPECT_NEAR(s.drives(0.0)(0), 0.0, 1e-15);
  EXPECT_NEAR(s.drives(0.0)(1), 1.0, 1e-15);
  EXPECT_NEAR(s.drives(1.0)(0), 1.0, 1e-15);
}

TEST(DeutschJozsa, SpectrumIsScheduleIndependent)
{
  const auto p = deutsch_jozsa(2, 0.8, 0.2, {1, 0, 0, 1});
  const Liouvillian l(p.model, SuperoperatorForm::kFull);
  RVector r(1);
  for (double x : {0.0, 0.4, 1.0}) {
    r << x;
    EXPECT_LT(ot::multiset_distance(eigenvalues(l.at(r)), ot::dj2_spectrum(0.8, 0.2, 2.0)), 1e-10);
  }
}

TEST(DeutschJozsa, PromiseChecks)
{
  EXPECT_THROW(deutsch_jozsa(2, 1.0, 0.1, {0, 0, 0, 1}), Error);
  const auto warned = deutsch_jozsa(2, 1.0, 0.1, {0, 0, 0, 1}, PromiseCheck::kWarn);
  EXPECT_FALSE(warned.warnings.empty());
  const auto constant = deutsch_jozsa(2, 1.0, 0.1, {1, 1, 1, 1});
  EXPECT_FALSE(constant.warnings.empty());
  EXPECT_THROW(deutsch_jozsa(2, 1.0, 0.1, {0, 1}), Error);
}

TEST(DeutschJozsa, OracleDiagonal)
{
  const RVector o = deutsch_jozsa_oracle({0, 1, 1, 0});
  EXPECT_DOUBLE_EQ(o(0), 1.0);
  EXPECT_DOUBLE_EQ(o(1), -1.0);
}

TEST(Transmon, AsymmetricRatesRejected)
{
  RMatrix rates = RMatrix::Zero(3, 3);
  rates(0, 1) = 0.1;
  try {
    transmon_qutrit(1.0, rates, RVector::Zero(3));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kSymmetry);
  }
}

TEST(ModelIo, RoundTripPreservesSuperoperator)
{
  const auto p = qubit_dephasing(1.0, 0.3);
  const LindbladModel back = model_from_json(model_to_json(p.model));
  RVector q(2);
  q << 0.3, 0.9;
  EXPECT_LT((Liouvillian(back).at(q) - Liouvillian(p.model).at(q)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ModelIo, MalformedInput)
{
  EXPECT_THROW(model_from_json("{"), Error);
  EXPECT_THROW(model_from_json(R"({"dimension": 2})"), Error);
  EXPECT_THROW(load_model_file("/nonexistent/model.json"), Error);
}

}  // namespace
}  // namespace qabos
