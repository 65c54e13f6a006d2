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
#include <limits>

#include "selforg/dynamics.hpp"
#include "selforg/error.hpp"
#include "selforg/linalg.hpp"
#include "selforg/rng.hpp"

namespace selforg {

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() {
  // 53 random bits, shifted by half an ulp away from zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

JumpChannel::JumpChannel(LinOp op_)
    : op(std::move(op_)), rate_op(LinOp(op.basis(), SparseMatrix(op.matrix().adjoint() * op.matrix()), false)) {
  // op^dag op is Hermitian up to rounding; store it symmetrized.
  SparseMatrix m = rate_op.matrix();
  m = 0.5 * (m + SparseMatrix(m.adjoint()));
  rate_op = LinOp(op.basis(), std::move(m), true);
}

JumpChannel cavity_decay(const BasisDescriptor& basis, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("cavity_decay: kappa must be > 0");
  const std::size_t idx = basis.find<FockSpace>();
  if (idx == basis.size())
    throw BasisMismatch("cavity_decay: basis " + basis.to_string() + " has no Fock factor");
  const int n_max = std::get<FockSpace>(basis.factors()[idx]).n_max;
  return JumpChannel(std::sqrt(2.0 * kappa) * lift(fock::annihilation(n_max), basis, idx));
}

SparseMatrix effective_hamiltonian(const LinOp& h, const std::vector<JumpChannel>& channels) {
  SparseMatrix heff = h.matrix();
  for (const auto& c : channels) {
    require_same_basis(h.basis(), c.op.basis(), "effective_hamiltonian");
    heff -= cplx(0.0, 0.5) * c.rate_op.matrix();
  }
  heff.makeCompressed();
  return heff;
}

StatePropagator::StatePropagator(const SparseMatrix& h_eff, const EvolutionOptions& options)
    : h_eff_(h_eff) {
  const auto n = static_cast<std::size_t>(h_eff.rows());
  const double omega = linalg::gershgorin_radius(h_eff);
  const double rk4_step = options.safety / std::max(omega, 1e-12);
  bool want_spectral =
      options.propagator == Propagator::spectral ||
      (options.propagator == Propagator::automatic && n <= options.spectral_max_dim);
  if (options.propagator == Propagator::automatic && options.interval_hint > 0.0) {
    const double rk4_cost = std::ceil(options.interval_hint / rk4_step) * 4.0 * double(h_eff.nonZeros());
    const double spectral_cost = 3.0 * double(n) * double(n);
    if (rk4_cost < spectral_cost) want_spectral = false;
  }
  if (want_spectral) {
    const DenseMatrix dense(h_eff);
    auto decomposition = linalg::eig(dense);
    lu_.compute(decomposition.vectors);
    const double scale = std::max(dense.cwiseAbs().maxCoeff(), 1.0);
    const double recon =
        (dense * decomposition.vectors -
         decomposition.vectors * decomposition.values.asDiagonal())
            .cwiseAbs()
            .maxCoeff() /
        scale;
    const bool ok = lu_.rcond() > 1e-10 && recon < 1e-9 &&
                    decomposition.values.imag().maxCoeff() < 1e-9 * scale;
    if (ok) {
      spectral_ = true;
      max_step_ = std::numeric_limits<double>::infinity();
      eigenvalues_ = std::move(decomposition.values);
      vectors_ = std::move(decomposition.vectors);
      gram_ = vectors_.adjoint() * vectors_;
      return;
    }
    if (options.propagator == Propagator::spectral)
      throw ToleranceFailure("spectral propagator: eigendecomposition is ill conditioned");
  }
  max_step_ = rk4_step;
}

Vector StatePropagator::to_coords(const Vector& psi) const {
  return spectral_ ? Vector(lu_.solve(psi)) : psi;
}

Vector StatePropagator::from_coords(const Vector& c) const {
  return spectral_ ? Vector(vectors_ * c) : c;
}

double StatePropagator::norm2(const Vector& c) const {
  return spectral_ ? std::real(c.dot(gram_ * c)) : c.squaredNorm();
}

Vector StatePropagator::advance(const Vector& c, double tau) const {
  if (spectral_) {
    Vector out(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k)
      out(k) = std::exp(cplx(0.0, -1.0) * eigenvalues_(k) * tau) * c(k);
    return out;
  }
  if (tau > max_step_ * (1.0 + 1e-12))
    throw StepSizeFailure("RK4 step " + std::to_string(tau) + " exceeds the stable step " +
                          std::to_string(max_step_));
  const cplx mi(0.0, -1.0);
  const Vector k1 = mi * (h_eff_ * c);
  const Vector k2 = mi * (h_eff_ * (c + 0.5 * tau * k1));
  const Vector k3 = mi * (h_eff_ * (c + 0.5 * tau * k2));
  const Vector k4 = mi * (h_eff_ * (c + tau * k3));
  return c + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<double> uniform_grid(double t_max, double dt, double t0) {
  if (!(dt > 0.0) || !(t_max >= t0))
    throw InvalidArgument("uniform_grid: need dt > 0 and t_max >= t0");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((t_max - t0) / dt + 1e-9));
  grid.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(t0 + k * dt);
  return grid;
}

}  // namespace selforg
