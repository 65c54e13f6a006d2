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

#include "selforg/lattice.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "selforg/error.hpp"

namespace selforg {

namespace {

using Triplet = Eigen::Triplet<cplx>;

BasisDescriptor modes(int M) { return BasisDescriptor({MomentumModes{M}}); }

LinOp from_triplets(const BasisDescriptor& basis, const std::vector<Triplet>& t,
                    bool hermitian) {
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  SparseMatrix m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return LinOp(basis, std::move(m), hermitian);
}

void require_cutoff(int M, int min, const char* what) {
  if (M < min)
    throw InvalidArgument(std::string(what) + ": momentum cutoff must be >= " +
                          std::to_string(min));
}

double coupling_strength(const ModelParams& p) {
  if (p.U0 * p.V0 < 0.0)
    throw NegativeProduct("U0*V0 = " + std::to_string(p.U0 * p.V0) + " is negative");
  const double sign = p.U0 < 0.0 ? -1.0 : (p.U0 > 0.0 ? 1.0 : 0.0);
  return sign * std::sqrt(p.U0 * p.V0);
}

// psi(Kx) up to the 1/sqrt(2 pi) factor.
cplx wavefunction_at(const Vector& c, int M, double kx) {
  cplx v = 0.0;
  for (int m = -M; m <= M; ++m) v += c(m + M) * std::exp(cplx(0.0, m * kx));
  return v;
}

double odd_weight(const Vector& c, int M) {
  double w = 0.0;
  for (int m = -M; m <= M; ++m)
    if (m % 2 != 0) w += std::norm(c(m + M));
  return w;
}

}  // namespace

LinOp build_kinetic(int M) {
  require_cutoff(M, 1, "build_kinetic");
  std::vector<Triplet> t;
  for (int m = -M; m <= M; ++m) t.emplace_back(m + M, m + M, double(m) * m);
  return from_triplets(modes(M), t, true);
}

LinOp build_sin(int M) {
  require_cutoff(M, 2, "build_sin");
  const cplx up = 1.0 / cplx(0.0, 2.0);
  std::vector<Triplet> t;
  for (int m = -M; m < M; ++m) {
    t.emplace_back(m + 1 + M, m + M, up);
    t.emplace_back(m + M, m + 1 + M, -up);
  }
  return from_triplets(modes(M), t, true);
}

LinOp build_sin2(int M) {
  require_cutoff(M, 2, "build_sin2");
  std::vector<Triplet> t;
  for (int m = -M; m <= M; ++m) {
    t.emplace_back(m + M, m + M, 0.5);
    if (m + 2 <= M) {
      t.emplace_back(m + 2 + M, m + M, -0.25);
      t.emplace_back(m + M, m + 2 + M, -0.25);
    }
  }
  return from_triplets(modes(M), t, true);
}

LinOp build_mirror(int M) {
  std::vector<Triplet> t;
  for (int m = -M; m <= M; ++m) t.emplace_back(-m + M, m + M, 1.0);
  return from_triplets(modes(M), t, true);
}

LinOp build_lattice_hamiltonian(double V0, int M) {
  return build_kinetic(M) + V0 * build_sin2(M);
}

WannierPair wannier_states(double V0, int M) {
  if (!(V0 < 0.0))
    throw InvalidArgument("wannier_states: V0 must be negative, got " + std::to_string(V0));
  const LinOp h = build_lattice_hamiltonian(V0, M);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h.dense());
  const Eigen::VectorXd& e = es.eigenvalues();
  const double splitting = e(1) - e(0);
  const double gap = e(2) - e(1);
  if (!(gap > 4.0 * splitting))
    throw DegenerateBand("wannier_states: band gap " + std::to_string(gap) +
                         " is not well separated from the splitting " +
                         std::to_string(splitting));

  Vector sym = es.eigenvectors().col(0);
  Vector anti = es.eigenvectors().col(1);
  double e_sym = e(0), e_anti = e(1);
  if (odd_weight(sym, M) > 0.5) {
    std::swap(sym, anti);
    std::swap(e_sym, e_anti);
  }

  const cplx at_site = wavefunction_at(sym, M, std::numbers::pi / 2);
  sym *= std::conj(at_site) / std::abs(at_site);
  const LinOp sinx = build_sin(M);
  const cplx overlap = sym.dot(sinx.matrix() * anti);
  anti *= std::conj(overlap) / std::abs(overlap);

  const double r2 = std::numbers::sqrt2;
  WannierPair w{StateVector(modes(M), (sym - anti) / r2),
                StateVector(modes(M), (sym + anti) / r2)};
  w.hopping = 0.5 * (e_sym - e_anti);
  w.J = std::abs(w.hopping);
  w.s = std::real(expectation(sinx, w.left));
  w.symmetric_energy = e_sym;
  w.antisymmetric_energy = e_anti;
  w.band_gap = gap;
  return w;
}

LinOp SymmetricIsometry::one_body(const LinOp& h) const {
  require_same_basis(h.basis(), modes(M), "one_body");
  const auto d = 2 * M + 1;
  SparseMatrix id(d, d);
  id.setIdentity();
  const SparseMatrix sum = SparseMatrix(Eigen::kroneckerProduct(h.matrix(), id)) +
                           SparseMatrix(Eigen::kroneckerProduct(id, h.matrix()));
  SparseMatrix reduced = map.adjoint() * sum * map;
  reduced.prune(cplx(0.0), 1e-15);
  return LinOp(basis(), std::move(reduced), h.hermitian());
}

LinOp SymmetricIsometry::two_body(const LinOp& a, const LinOp& b) const {
  require_same_basis(a.basis(), modes(M), "two_body");
  require_same_basis(b.basis(), modes(M), "two_body");
  const SparseMatrix prod = Eigen::kroneckerProduct(a.matrix(), b.matrix());
  SparseMatrix reduced = map.adjoint() * prod * map;
  reduced.prune(cplx(0.0), 1e-15);
  return LinOp(basis(), std::move(reduced));
}

StateVector SymmetricIsometry::symmetrized_product(const StateVector& u,
                                                   const StateVector& v) const {
  require_same_basis(u.basis(), modes(M), "symmetrized_product");
  require_same_basis(v.basis(), modes(M), "symmetrized_product");
  const Vector uv = Eigen::kroneckerProduct(u.amplitudes(), v.amplitudes());
  const Vector vu = Eigen::kroneckerProduct(v.amplitudes(), u.amplitudes());
  Vector c = map.adjoint() * (uv + vu);
  StateVector out(basis(), std::move(c));
  out.normalize();
  return out;
}

SymmetricIsometry symmetrize_two_particle(int M) {
  require_cutoff(M, 0, "symmetrize_two_particle");
  const int d = 2 * M + 1;
  std::vector<Triplet> t;
  int col = 0;
  const double h = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j, ++col) {
      if (i == j) {
        t.emplace_back(i * d + i, col, 1.0);
      } else {
        t.emplace_back(i * d + j, col, h);
        t.emplace_back(j * d + i, col, h);
      }
    }
  SymmetricIsometry s;
  s.M = M;
  s.map.resize(d * d, col);
  s.map.setFromTriplets(t.begin(), t.end());
  return s;
}

BasisDescriptor full_model_basis(const ModelParams& p) {
  if (p.N == 1) return BasisDescriptor({MomentumModes{p.M}, FockSpace{p.n_max}});
  if (p.N == 2) return BasisDescriptor({SymmetricMomentumPair{p.M}, FockSpace{p.n_max}});
  throw InvalidArgument("full model supports N = 1 or 2, got " + std::to_string(p.N));
}

LinOp build_full_hamiltonian(const ModelParams& p) {
  p.validate();
  const double g = coupling_strength(p);
  LinOp hp = build_lattice_hamiltonian(p.V0, p.M);
  LinOp sinx = build_sin(p.M);
  if (p.N == 2) {
    const auto s = symmetrize_two_particle(p.M);
    hp = s.one_body(hp);
    sinx = s.one_body(sinx);
  }
  const LinOp a = fock::annihilation(p.n_max);
  const LinOp quad(a.basis(), a.matrix() + SparseMatrix(a.matrix().adjoint()), true);
  const LinOp id_p = identity(hp.basis());
  const LinOp id_f = identity(a.basis());
  LinOp h = kron(hp, id_f) - p.cavity_detuning() * kron(id_p, fock::number(p.n_max));
  if (g != 0.0) h = h + g * kron(sinx, quad);
  return h;
}

LinOp full_model_parity(const ModelParams& p) {
  LinOp mirror = build_mirror(p.M);
  if (p.N == 2) {
    const auto s = symmetrize_two_particle(p.M);
    const SparseMatrix mm = Eigen::kroneckerProduct(mirror.matrix(), mirror.matrix());
    SparseMatrix reduced = s.map.adjoint() * mm * s.map;
    reduced.prune(cplx(0.0), 1e-15);
    mirror = LinOp(s.basis(), std::move(reduced), true);
  } else if (p.N != 1) {
    throw InvalidArgument("full model supports N = 1 or 2");
  }
  std::vector<Triplet> t;
  for (int n = 0; n <= p.n_max; ++n) t.emplace_back(n, n, n % 2 ? -1.0 : 1.0);
  return kron(mirror, from_triplets(BasisDescriptor({FockSpace{p.n_max}}), t, true));
}

StateVector initial_state_full(const ModelParams& p, InitialState which, Orbital orbital) {
  p.validate();
  StateVector l(modes(p.M), Vector::Zero(2 * p.M + 1));
  StateVector r = l;
  if (orbital == Orbital::wannier) {
    const WannierPair w = wannier_states(p.V0, p.M);
    l = w.left;
    r = w.right;
  } else {
    const double norm = std::sqrt(2.0 * p.M + 1.0);
    for (int m = -p.M; m <= p.M; ++m) {
      r.amplitudes()(m + p.M) = std::exp(cplx(0.0, -m * std::numbers::pi / 2)) / norm;
      l.amplitudes()(m + p.M) = std::exp(cplx(0.0, m * std::numbers::pi / 2)) / norm;
    }
  }
  const StateVector vac = fock::basis_state(p.n_max, 0);

  if (p.N == 1) {
    switch (which) {
      case InitialState::localized_right: return kron(r, vac);
      case InitialState::localized_left: return kron(l, vac);
      default:
        throw InvalidArgument("Mott insulator and superfluid states need N = 2");
    }
  }

  const auto s = symmetrize_two_particle(p.M);
  StateVector particles = s.symmetrized_product(l, r);
  switch (which) {
    case InitialState::localized_right: particles = s.symmetrized_product(r, r); break;
    case InitialState::localized_left: particles = s.symmetrized_product(l, l); break;
    case InitialState::mott_insulator: break;
    case InitialState::superfluid: {
      const Vector sf = particles.amplitudes() +
                        (s.symmetrized_product(l, l).amplitudes() +
                         s.symmetrized_product(r, r).amplitudes()) /
                            std::numbers::sqrt2;
      particles = StateVector(s.basis(), sf / std::numbers::sqrt2);
      particles.normalize();
      break;
    }
  }
  return kron(particles, vac);
}

}  // namespace selforg
