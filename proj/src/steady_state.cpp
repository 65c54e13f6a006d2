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

#include <cmath>
#include <vector>

#include <Eigen/SparseLU>

#include "selforg/dynamics.hpp"
#include "selforg/error.hpp"

namespace selforg {

namespace {

using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<cplx>;

DenseMatrix unvec(const Vector& v, Eigen::Index d) {
  DenseMatrix m = Eigen::Map<const DenseMatrix>(v.data(), d, d);
  return 0.5 * (m + m.adjoint());
}

DenseMatrix maximally_mixed(Eigen::Index d) {
  return DenseMatrix::Identity(d, d) / double(d);
}

double trace_norm_hermitian(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// Smallest singular value of the factorized matrix by inverse iteration on
// (A A^dag)^{-1}.
double smallest_singular_value(Eigen::SparseLU<ColSparse>& lu, Eigen::Index n) {
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx(1.0 + 0.37 * std::sin(1.3 * i), 0.11 * std::cos(0.7 * i));
  x.normalize();
  double growth = 0.0;
  for (int it = 0; it < 40; ++it) {
    const Vector y = lu.solve(x);
    const Vector z = lu.adjoint().solve(y);
    const double g = z.norm();
    if (!std::isfinite(g) || g == 0.0) return 0.0;
    x = z / g;
    if (it > 3 && std::abs(g - growth) <= 1e-10 * g) {
      growth = g;
      break;
    }
    growth = g;
  }
  return 1.0 / std::sqrt(growth);
}

ColSparse bordered(const SparseMatrix& l, Eigen::Index d) {
  const ColSparse lc = l;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(lc.nonZeros() + d));
  for (Eigen::Index k = 0; k < lc.outerSize(); ++k)
    for (ColSparse::InnerIterator it(lc, k); it; ++it)
      if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index k = 0; k < d; ++k) t.emplace_back(0, k * d + k, 1.0);
  ColSparse a(d * d, d * d);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

// Backward Euler (I - h L) rho_{k+1} = rho_k with a fixed large step.
DenseMatrix relax(const SparseMatrix& l, DenseMatrix rho, double tol, double max_time,
                  const LinOp& h, const std::vector<JumpChannel>& channels) {
  const Eigen::Index d = rho.rows();
  double step = 1.0;
  double elapsed = 0.0;
  while (elapsed < max_time) {
    ColSparse a = -step * ColSparse(l);
    for (Eigen::Index i = 0; i < d * d; ++i) a.coeffRef(i, i) += 1.0;
    a.makeCompressed();
    Eigen::SparseLU<ColSparse> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw ToleranceFailure("relaxation: factorization failed");
    for (int it = 0; it < 50 && elapsed < max_time; ++it) {
      const Vector v = lu.solve(Eigen::Map<const Vector>(rho.data(), d * d));
      rho = unvec(v, d);
      rho /= rho.trace();
      elapsed += step;
      if (stationarity_residual(h, channels, DensityOperator(h.basis(), rho)) < tol) return rho;
    }
    step *= 10.0;
  }
  return rho;
}

}  // namespace

double stationarity_residual(const LinOp& h, const std::vector<JumpChannel>& channels,
                             const DensityOperator& rho) {
  return trace_norm_hermitian(liouvillian_apply(h, channels, rho));
}

SteadyState steady_state(const LinOp& h, const std::vector<JumpChannel>& channels,
                         const SteadyStateOptions& options) {
  const auto d = static_cast<Eigen::Index>(h.dimension());
  const SparseMatrix l = liouvillian_matrix(h, channels);
  SteadyState out{DensityOperator(h.basis(), maximally_mixed(d))};
  out.method = options.method;

  const ColSparse a = bordered(l, d);
  Eigen::SparseLU<ColSparse> lu;
  lu.compute(a);
  const bool factorized = lu.info() == Eigen::Success;
  out.gap_estimate = factorized ? smallest_singular_value(lu, d * d) : 0.0;
  out.degenerate = !(out.gap_estimate > options.gap_tolerance);

  DenseMatrix start = maximally_mixed(d);
  if (options.initial) {
    require_same_basis(options.initial->basis(), h.basis(), "steady_state");
    start = options.initial->matrix();
  }

  switch (options.method) {
    case SteadyStateMethod::linear_solve: {
      if (factorized && !out.degenerate) {
        Vector rhs = Vector::Zero(d * d);
        rhs(0) = 1.0;
        const Vector v = lu.solve(rhs);
        DenseMatrix rho = unvec(v, d);
        rho /= rho.trace();
        out.rho = DensityOperator(h.basis(), rho);
      } else {
        out.rho = DensityOperator(
            h.basis(), relax(l, start, options.residual_tolerance, options.max_time, h, channels));
      }
      break;
    }
    case SteadyStateMethod::relaxation:
      out.rho = DensityOperator(
          h.basis(), relax(l, start, options.residual_tolerance, options.max_time, h, channels));
      break;
    case SteadyStateMethod::time_integration: {
      // Repeated master-equation segments until the derivative is small.
      DensityOperator rho(h.basis(), start);
      double t = 0.0, segment = 1.0;
      EvolutionOptions evo = options.evolution;
      evo.propagator = Propagator::rk4;
      while (t < options.max_time) {
        const auto sol = me_evolve(h, channels, rho, {}, {0.0, segment}, evo);
        rho = *sol.final_state;
        t += segment;
        if (stationarity_residual(h, channels, rho) < options.residual_tolerance) break;
        segment = std::min(2.0 * segment, 100.0);
      }
      out.rho = rho;
      break;
    }
  }
  out.residual = stationarity_residual(h, channels, out.rho);
  return out;
}

}  // namespace selforg
