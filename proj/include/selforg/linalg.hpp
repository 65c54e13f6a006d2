// Copyright 2026 The selforg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "selforg/hilbert.hpp"

namespace selforg::linalg {

/// Right eigenpairs of a general complex matrix, a = V diag(values) V^{-1}.
struct Eigendecomposition {
  Vector values;
  DenseMatrix vectors;
};

/// Backed by LAPACK zgeev. Throws ToleranceFailure if LAPACK does not converge.
Eigendecomposition eig(const DenseMatrix& a);

/// Largest absolute row sum; an upper bound on the spectral radius.
double gershgorin_radius(const SparseMatrix& a);

}  // namespace selforg::linalg
