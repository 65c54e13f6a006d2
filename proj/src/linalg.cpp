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

#include "selforg/linalg.hpp"

#include <complex>
#include <string>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "selforg/error.hpp"

namespace selforg::linalg {

Eigendecomposition eig(const DenseMatrix& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (a.rows() != a.cols()) throw InvalidArgument("eig: matrix is not square");
  DenseMatrix work = a;  // column major, overwritten by zgeev
  Eigendecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(work.data()),
      n, reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, n,
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n);
  if (info != 0) throw ToleranceFailure("zgeev failed with info " + std::to_string(info));
  return out;
}

double gershgorin_radius(const SparseMatrix& a) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) row += std::abs(it.value());
    worst = std::max(worst, row);
  }
  return worst;
}

}  // namespace selforg::linalg
