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

#include <unsupported/Eigen/KroneckerProduct>

#include "selforg/dynamics.hpp"
#include "selforg/error.hpp"
#include "selforg/linalg.hpp"

namespace selforg {

namespace {

using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

// Right-hand side for a Hermitian rho: -i(H_eff rho - h.c.) + sum C rho C^dag.
DenseMatrix rhs(const SparseMatrix& heff, const std::vector<SparseMatrix>& jumps,
                const DenseMatrix& rho) {
  const DenseMatrix a = heff * rho;
  DenseMatrix d = cplx(0.0, -1.0) * (a - a.adjoint());
  for (const auto& c : jumps) {
    const DenseMatrix b = c * rho;
    d += c * DenseMatrix(b.adjoint());
  }
  return d;
}

void hermitize(DenseMatrix& m) { m = 0.5 * (m + m.adjoint()).eval(); }

void check_finite(const DenseMatrix& m, double t) {
  if (!m.allFinite()) throw NonFiniteValue("non-finite density matrix at t = " + std::to_string(t));
}

double real_expectation(const LinOp& a, const DenseMatrix& rho) {
  double s = 0.0;
  const SparseMatrix& m = a.matrix();
  for (Eigen::Index i = 0; i < m.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(m, i); it; ++it)
      s += std::real(it.value() * rho(it.col(), it.row()));
  return s;
}

}  // namespace

const std::vector<double>& MESolution::operator[](const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return series[i];
  throw InvalidArgument("no series named '" + name + "'");
}

DenseMatrix liouvillian_apply(const LinOp& h, const std::vector<JumpChannel>& channels,
                              const DensityOperator& rho) {
  require_same_basis(h.basis(), rho.basis(), "liouvillian_apply");
  const DenseMatrix& r = rho.matrix();
  DenseMatrix d = cplx(0.0, -1.0) * (h.matrix() * r - r * h.matrix());
  for (const auto& c : channels) {
    require_same_basis(c.op.basis(), rho.basis(), "liouvillian_apply");
    const SparseMatrix cd = c.op.matrix().adjoint();
    d += c.op.matrix() * r * cd;
    d -= 0.5 * (c.rate_op.matrix() * r + r * c.rate_op.matrix());
  }
  return d;
}

SparseMatrix liouvillian_matrix(const LinOp& h, const std::vector<JumpChannel>& channels) {
  const SparseMatrix heff = effective_hamiltonian(h, channels);
  const auto d = heff.rows();
  SparseMatrix id(d, d);
  id.setIdentity();
  const SparseMatrix heff_conj = heff.conjugate();
  SparseMatrix l = cplx(0.0, -1.0) * SparseMatrix(Eigen::kroneckerProduct(id, heff)) +
                   cplx(0.0, 1.0) * SparseMatrix(Eigen::kroneckerProduct(heff_conj, id));
  for (const auto& c : channels) {
    const SparseMatrix cc = c.op.matrix().conjugate();
    l += SparseMatrix(Eigen::kroneckerProduct(cc, c.op.matrix()));
  }
  l.prune(cplx(0.0));
  l.makeCompressed();
  return l;
}

MESolution me_evolve(const LinOp& h, const std::vector<JumpChannel>& channels,
                     const DensityOperator& rho0, const std::vector<Observable>& observables,
                     const std::vector<double>& t_grid, const EvolutionOptions& options) {
  require_same_basis(h.basis(), rho0.basis(), "me_evolve");
  for (const auto& o : observables) require_same_basis(o.op.basis(), rho0.basis(), "observable");
  if (t_grid.empty()) throw InvalidArgument("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("time grid must be strictly increasing");

  const auto d = static_cast<Eigen::Index>(rho0.basis().dimension());
  const cplx trace0 = rho0.trace();
  MESolution sol;
  sol.times = t_grid;
  for (const auto& o : observables) sol.names.push_back(o.name);
  sol.series.assign(observables.size(), {});

  auto record = [&](const DenseMatrix& rho) {
    for (std::size_t k = 0; k < observables.size(); ++k)
      sol.series[k].push_back(real_expectation(observables[k].op, rho));
    sol.trace_drift = std::max(sol.trace_drift, std::abs(rho.trace() - trace0));
    if (options.keep_states) sol.states.emplace_back(rho0.basis(), rho);
  };

  const std::size_t dim2 = static_cast<std::size_t>(d * d);
  bool spectral = options.propagator == Propagator::spectral ||
                  (options.propagator == Propagator::automatic && dim2 <= options.spectral_max_dim);
  DenseMatrix rho = rho0.matrix();

  if (spectral) {
    const DenseMatrix l(liouvillian_matrix(h, channels));
    auto dec = linalg::eig(l);
    Eigen::PartialPivLU<DenseMatrix> lu(dec.vectors);
    const double scale = std::max(l.cwiseAbs().maxCoeff(), 1.0);
    const double recon =
        (l * dec.vectors - dec.vectors * dec.values.asDiagonal()).cwiseAbs().maxCoeff() / scale;
    if (lu.rcond() > 1e-12 && recon < 1e-9) {
      sol.spectral = true;
      const Vector c0 = lu.solve(Eigen::Map<const Vector>(rho.data(), d * d));
      for (double t : t_grid) {
        Vector c = c0;
        for (Eigen::Index k = 0; k < c.size(); ++k)
          c(k) *= std::exp(dec.values(k) * (t - t_grid.front()));
        const Vector v = dec.vectors * c;
        rho = Eigen::Map<const DenseMatrix>(v.data(), d, d);
        hermitize(rho);
        check_finite(rho, t);
        record(rho);
      }
    } else if (options.propagator == Propagator::spectral) {
      throw ToleranceFailure("spectral master equation: eigendecomposition is ill conditioned");
    } else {
      spectral = false;
    }
  }

  if (!spectral) {
    const SparseMatrix heff = effective_hamiltonian(h, channels);
    std::vector<SparseMatrix> jumps;
    SparseMatrix rates(d, d);
    for (const auto& c : channels) {
      jumps.push_back(c.op.matrix());
      rates += c.rate_op.matrix();
    }
    const double omega = 2.0 * linalg::gershgorin_radius(heff) + linalg::gershgorin_radius(rates);
    const double dt_max = options.safety / std::max(omega, 1e-12);
    record(rho);
    double t = t_grid.front();
    for (std::size_t g = 1; g < t_grid.size(); ++g) {
      const double target = t_grid[g];
      const auto steps = static_cast<long>(std::ceil((target - t) / dt_max - 1e-9));
      const double dt = (target - t) / double(std::max(steps, 1L));
      for (long s = 0; s < std::max(steps, 1L); ++s) {
        const DenseMatrix k1 = rhs(heff, jumps, rho);
        const DenseMatrix k2 = rhs(heff, jumps, rho + 0.5 * dt * k1);
        const DenseMatrix k3 = rhs(heff, jumps, rho + 0.5 * dt * k2);
        const DenseMatrix k4 = rhs(heff, jumps, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        hermitize(rho);
      }
      t = target;
      check_finite(rho, t);
      record(rho);
    }
  }

  sol.final_state.emplace(rho0.basis(), rho);
  if (sol.trace_drift > 1e-8)
    throw ToleranceFailure("master equation trace drifted by " + std::to_string(sol.trace_drift));
  return sol;
}

}  // namespace selforg
