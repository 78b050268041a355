// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qabos
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Failure categories. The CLI maps these onto exit codes: input-type errors
/// exit with 2, numerical failures with 3.
enum class ErrorCode
{
  kInvalidDimension,
  kShape,
  kTrace,
  kDomain,
  kInvalidArgument,
  kNonUnital,
  kNumerical,
  kNoValidGap,
  kResolution,
  kGapCollapse,
  kInfiniteSpeed,
  kDegenerateDrive,
  kNonConvergence,
  kSingularPath,
  kSingularParameter,
  kSingularConstant,
  kDefectiveSpectrum,
  kStateValidity,
  kStiffness,
  kUnreachableInfidelity,
  kInvalidPromise,
  kSymmetry,
  kModelFormat,
};

const char *to_string(ErrorCode code);

/// True for errors caused by bad user input rather than by the numerics.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace qabos
