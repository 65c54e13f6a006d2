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

#include <optional>
#include <string>

namespace selforg {

/// Physical parameters in recoil units (energies and rates in w_rec, times in
/// 1/w_rec, hbar = K = 1).
struct ModelParams {
  double V0 = -10.0;      ///< lattice depth, negative for red detuning
  double U0 = 0.0;        ///< light shift per photon, <= 0
  double kappa = 10.0;    ///< cavity field decay rate
  std::optional<double> DeltaC;  ///< cavity detuning; resonance rule if unset
  int N = 1;              ///< particle count, 1 or 2
  int M = 32;             ///< momentum cutoff, modes m = -M..M
  int n_max = 8;          ///< Fock cutoff

  /// Explicit Delta_C, or N*U0 - kappa (so that Delta_C - N*U0 = -kappa).
  double delta_c() const { return DeltaC ? *DeltaC : N * U0 - kappa; }

  /// Effective cavity detuning Delta_C - N*U0 multiplying -a^dagger a.
  double cavity_detuning() const { return delta_c() - N * U0; }

  bool resonant() const { return cavity_detuning() == -kappa; }

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  /// Defaults for a particle number and coupling: M = 32 for one particle,
  /// M = 16 for two, n_max from default_fock_cutoff, resonance rule active.
  static ModelParams defaults(int N, double U0);

  std::string to_string() const;
};

/// max(8, ceil(10 |alpha_max|^2) + 4) with alpha_max the organised steady
/// field N * alpha(pi/2).
int default_fock_cutoff(const ModelParams& p);

}  // namespace selforg
