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

#include "selforg/bose_hubbard.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "selforg/error.hpp"

namespace selforg {

namespace {

using Triplet = Eigen::Triplet<cplx>;

void require_particles(int N) {
  if (N != 1 && N != 2)
    throw InvalidArgument("Bose-Hubbard model supports N = 1 or 2, got " +
                          std::to_string(N));
}

BasisDescriptor occupations(int N) { return BasisDescriptor({BHOccupation{N}}); }

// Particle-only operator with the given diagonal n_l(i), n_r(i) -> value.
template <class F>
LinOp diagonal_particle_op(int N, F value) {
  require_particles(N);
  SparseMatrix m(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    const double v = value(N - i, i);
    if (v != 0.0) m.insert(i, i) = v;
  }
  return LinOp(occupations(N), std::move(m), true);
}

LinOp hopping_op(int N) {
  require_particles(N);
  std::vector<Triplet> t;
  // b_l^dag b_r: index i (n_r = i) -> i - 1.
  for (int i = 1; i <= N; ++i) {
    const double amp = std::sqrt(double(i) * (N - i + 1));
    t.emplace_back(i - 1, i, amp);
    t.emplace_back(i, i - 1, amp);
  }
  SparseMatrix m(N + 1, N + 1);
  m.setFromTriplets(t.begin(), t.end());
  return LinOp(occupations(N), std::move(m), true);
}

LinOp with_field_identity(const LinOp& particles, int n_max) {
  return kron(particles, identity(BasisDescriptor({FockSpace{n_max}})));
}

}  // namespace

BHParams BHParams::from_model(const ModelParams& p, const Overrides& o) {
  p.validate();
  if (p.U0 * p.V0 < 0.0)
    throw NegativeProduct("U0*V0 = " + std::to_string(p.U0 * p.V0) + " is negative");
  BHParams b;
  b.U0 = p.U0;
  b.DeltaC = p.delta_c();
  b.kappa = p.kappa;
  b.N = p.N;
  b.n_max = p.n_max;
  if (!o.J || !o.Jtilde) {
    const WannierPair w = wannier_states(p.V0, p.M);
    const double sign = p.U0 < 0.0 ? -1.0 : 0.0;
    b.J = w.hopping;
    b.Jtilde = sign * std::sqrt(p.U0 * p.V0) * w.s;
  }
  if (o.J) b.J = *o.J;
  if (o.Jtilde) b.Jtilde = *o.Jtilde;
  return b;
}

BasisDescriptor bh_basis(int N, int n_max) {
  require_particles(N);
  return BasisDescriptor({BHOccupation{N}, FockSpace{n_max}});
}

LinOp build_bh_hamiltonian(const BHParams& p) {
  require_particles(p.N);
  if (p.n_max < 1) throw InvalidArgument("BHParams.n_max must be >= 1");
  if (!(p.kappa > 0.0)) throw InvalidArgument("BHParams.kappa must be > 0");
  const LinOp a = fock::annihilation(p.n_max);
  const LinOp quad(a.basis(), a.matrix() + SparseMatrix(a.matrix().adjoint()), true);
  const LinOp id_p = identity(occupations(p.N));
  const LinOp imbalance = diagonal_particle_op(p.N, [](int nl, int nr) { return double(nl - nr); });
  LinOp h = p.J * with_field_identity(hopping_op(p.N), p.n_max) -
            p.cavity_detuning() * kron(id_p, fock::number(p.n_max));
  if (p.Jtilde != 0.0) h = h + p.Jtilde * kron(imbalance, quad);
  return h;
}

StateVector bh_state(BHState which, int N, int n_max) {
  require_particles(N);
  Vector c = Vector::Zero(N + 1);
  if (N == 1) {
    switch (which) {
      case BHState::localized_left: c(0) = 1.0; break;
      case BHState::localized_right: c(1) = 1.0; break;
      default: throw InvalidArgument("single-particle BH states are localized_left/right");
    }
  } else {
    switch (which) {
      case BHState::mott_insulator: c(1) = 1.0; break;
      case BHState::minus:
      case BHState::localized_left: c(0) = 1.0; break;
      case BHState::plus:
      case BHState::localized_right: c(2) = 1.0; break;
      case BHState::superfluid:
        c(1) = 1.0 / std::numbers::sqrt2;
        c(0) = c(2) = 0.5;
        break;
    }
  }
  return kron(StateVector(occupations(N), std::move(c)), fock::basis_state(n_max, 0));
}

LinOp density_correlation_op(int N, int n_max) {
  if (N != 2) throw InvalidArgument("density correlation needs N = 2");
  return with_field_identity(
      diagonal_particle_op(N, [](int nl, int nr) { return double(nl * nr); }), n_max);
}

LinOp site_imbalance_op(int N, int n_max) {
  return with_field_identity(
      diagonal_particle_op(N, [](int nl, int nr) { return double(nl - nr); }), n_max);
}

LinOp site_occupation_op(Site site, int N, int n_max) {
  return with_field_identity(diagonal_particle_op(N,
                                                  [site](int nl, int nr) {
                                                    return double(site == Site::left ? nl : nr);
                                                  }),
                             n_max);
}

LinOp bh_parity_op(int N, int n_max) {
  require_particles(N);
  SparseMatrix swap(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) swap.insert(N - i, i) = 1.0;
  SparseMatrix flip(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) flip.insert(n, n) = n % 2 ? -1.0 : 1.0;
  return kron(LinOp(occupations(N), std::move(swap), true),
              LinOp(BasisDescriptor({FockSpace{n_max}}), std::move(flip), true));
}

LinOp bh_photon_number_op(int N, int n_max) {
  return kron(identity(occupations(N)), fock::number(n_max));
}

}  // namespace selforg
