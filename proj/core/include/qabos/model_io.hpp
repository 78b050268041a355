// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "qabos/liouvillian.hpp"

namespace qabos
{

/// Reads an affine LindbladModel from a JSON document:
///
///   {
///     "dimension": 2,
///     "drive_arity": 2,
///     "basis_norm": 2.0,                       (optional)
///     "hamiltonian_terms": [
///       {"coefficient": "constant", "matrix": [[re, im], ...]},
///       {"coefficient": 0, "matrix": [[re, im], ...]}
///     ],
///     "dissipators": [{"rate": 0.1, "matrix": [[re, im], ...]}]
///   }
///
/// Matrices are D² [re, im] pairs in row-major order; a nested list of D rows
/// of D pairs is accepted too. Terms sharing a coefficient are summed.
/// Throws Error(kModelFormat) on malformed input.
LindbladModel model_from_json(const std::string &text);

/// model_from_json on the contents of `path`; a missing file is kModelFormat.
LindbladModel load_model_file(const std::string &path);

/// Inverse of model_from_json for affine models.
std::string model_to_json(const LindbladModel &model);

}  // namespace qabos
