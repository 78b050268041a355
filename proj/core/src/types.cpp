// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/types.hpp"

namespace qabos
{

const char *to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kTrace: return "trace";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kNonUnital: return "non-unital";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kNoValidGap: return "no-valid-gap";
    case ErrorCode::kResolution: return "resolution";
    case ErrorCode::kGapCollapse: return "gap-collapse";
    case ErrorCode::kInfiniteSpeed: return "infinite-speed";
    case ErrorCode::kDegenerateDrive: return "degenerate-drive";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kSingularPath: return "singular-path";
    case ErrorCode::kSingularParameter: return "singular-parameter";
    case ErrorCode::kSingularConstant: return "singular-constant";
    case ErrorCode::kDefectiveSpectrum: return "defective-spectrum";
    case ErrorCode::kStateValidity: return "state-validity";
    case ErrorCode::kStiffness: return "stiffness";
    case ErrorCode::kUnreachableInfidelity: return "unreachable-infidelity";
    case ErrorCode::kInvalidPromise: return "invalid-promise";
    case ErrorCode::kSymmetry: return "symmetry";
    case ErrorCode::kModelFormat: return "model-format";
  }
  return "unknown";
}

bool is_input_error(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::kInvalidDimension:
    case ErrorCode::kShape:
    case ErrorCode::kTrace:
    case ErrorCode::kDomain:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidPromise:
    case ErrorCode::kSymmetry:
    case ErrorCode::kModelFormat:
      return true;
    default:
      return false;
  }
}

}  // namespace qabos
