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

// Full lattice-cavity model in the plane-wave basis e^{imKx} on one lattice
// wavelength (two sites, Kx in (-pi, pi], periodic boundary).

#include "selforg/hilbert.hpp"
#include "selforg/params.hpp"

namespace selforg {

/// p^2/2mu: diagonal with m^2 (recoil units).
LinOp build_kinetic(int M);
/// sin(Kx): <m+1|sin|m> = 1/(2i), <m-1|sin|m> = -1/(2i).
LinOp build_sin(int M);
/// sin^2(Kx): diagonal 1/2, <m+-2|sin^2|m> = -1/4.
LinOp build_sin2(int M);
/// Spatial mirror x -> -x, i.e. |m> -> |-m>.
LinOp build_mirror(int M);
/// p^2/2mu + V0 sin^2(Kx).
LinOp build_lattice_hamiltonian(double V0, int M);

/// Lowest-band localized orbitals of the bare lattice.
struct WannierPair {
  StateVector left;
  StateVector right;
  double J = 0.0;        ///< tunnelling scale |<l|H|r>| (> 0)
  double hopping = 0.0;  ///< signed matrix element <l|p^2/2mu + V0 sin^2|r>
  double s = 0.0;        ///< <l|sin(Kx)|l> (< 0)
  double symmetric_energy = 0.0;      ///< lowest band state, even under x -> x + pi
  double antisymmetric_energy = 0.0;  ///< partner, odd under x -> x + pi
  double band_gap = 0.0;  ///< third eigenvalue minus antisymmetric_energy
};

/// Diagonalizes the bare lattice Hamiltonian and builds (psi_sym +- psi_anti)/sqrt2
/// with phases fixed so that the right orbital sits at Kx = +pi/2.
/// Throws DegenerateBand when the band gap is below four times the band
/// splitting, InvalidArgument when V0 >= 0.
WannierPair wannier_states(double V0, int M);

/// Isometry from the two-particle symmetric subspace into the product space.
struct SymmetricIsometry {
  int M = 0;
  /// (2M+1)^2 x dim columns (|i,j> + |j,i>)/sqrt2 for i < j and |i,i>.
  SparseMatrix map;

  std::size_t dimension() const { return static_cast<std::size_t>(map.cols()); }
  BasisDescriptor basis() const { return BasisDescriptor({SymmetricMomentumPair{M}}); }
  /// S^dagger (h x 1 + 1 x h) S for a single-particle operator h.
  LinOp one_body(const LinOp& h) const;
  /// S^dagger (a x b) S for single-particle operators a, b.
  LinOp two_body(const LinOp& a, const LinOp& b) const;
  /// Normalized symmetrization of the product u x v, in subspace coordinates.
  StateVector symmetrized_product(const StateVector& u, const StateVector& v) const;
};

SymmetricIsometry symmetrize_two_particle(int M);

/// H = kinetic + V0 sin^2 - (Delta_C - N U0) a^dagger a
///     + sign(U0) sqrt(U0 V0) sum_i sin(Kx_i) (a^dagger + a)
/// on MomentumModes x Fock (N = 1) or SymmetricMomentumPair x Fock (N = 2).
/// Throws NegativeProduct if U0 V0 < 0.
LinOp build_full_hamiltonian(const ModelParams& p);

/// Basis of build_full_hamiltonian for the given parameters.
BasisDescriptor full_model_basis(const ModelParams& p);

/// Parity (x -> -x for every particle) x (a -> -a).
LinOp full_model_parity(const ModelParams& p);

enum class InitialState { localized_right, localized_left, mott_insulator, superfluid };
/// Orbital used for a particle placed on a site: lowest-band Wannier state, or
/// the momentum-truncated point particle sum_m e^{-im Kx0} |m> / sqrt(2M+1).
enum class Orbital { wannier, point };

/// Particle state times the Fock vacuum. For two particles, localized-right
/// is |0,2> (both on the right site), localized-left |2,0>, Mott insulator
/// |1,1> and superfluid (|1,1> + (|2,0> + |0,2>)/sqrt2)/sqrt2.
StateVector initial_state_full(const ModelParams& p, InitialState which,
                               Orbital orbital = Orbital::wannier);

}  // namespace selforg
