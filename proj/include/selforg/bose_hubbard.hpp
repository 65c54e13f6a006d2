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

// Two-site Bose-Hubbard model coupled to the cavity mode, on
// BHOccupation(N) x FockSpace(n_max).

#include <optional>

#include "selforg/cavity_field.hpp"
#include "selforg/hilbert.hpp"
#include "selforg/lattice.hpp"
#include "selforg/params.hpp"

namespace selforg {

struct BHParams {
  double J = 0.0;       ///< signed hopping <l|H|r>; negative for V0 < 0
  double Jtilde = 0.0;  ///< sign(U0) sqrt(U0 V0) <l|sin(Kx)|l>
  double U0 = 0.0;
  double DeltaC = -10.0;
  double kappa = 10.0;
  int N = 1;
  int n_max = 8;

  double cavity_detuning() const { return DeltaC - N * U0; }

  /// Overrides bypass the Wannier computation (testing only).
  struct Overrides {
    std::optional<double> J;
    std::optional<double> Jtilde;
  };

  /// J and Jtilde from wannier_states(p.V0, p.M).
  static BHParams from_model(const ModelParams& p, const Overrides& o = {});
};

/// J (b_l^dag b_r + h.c.) - (Delta_C - N U0) a^dag a + Jtilde (n_l - n_r)(a + a^dag).
LinOp build_bh_hamiltonian(const BHParams& p);

BasisDescriptor bh_basis(int N, int n_max);

enum class BHState { mott_insulator, superfluid, minus, plus, localized_left, localized_right };

/// States times the Fock vacuum. minus = |2,0>, plus = |0,2>,
/// superfluid = (|1,1> + (|2,0> + |0,2>)/sqrt2)/sqrt2. For N = 1 only the
/// localized states exist: left = |1,0>, right = |0,1>.
StateVector bh_state(BHState which, int N, int n_max);

/// n_l n_r on the particles, identity on the field. Requires N = 2.
LinOp density_correlation_op(int N, int n_max);
/// n_l - n_r on the particles, identity on the field.
LinOp site_imbalance_op(int N, int n_max);
/// n_l or n_r.
LinOp site_occupation_op(Site site, int N, int n_max);
/// Swap l <-> r together with a -> -a.
LinOp bh_parity_op(int N, int n_max);
/// Photon number lifted to the BH basis.
LinOp bh_photon_number_op(int N, int n_max);

}  // namespace selforg
