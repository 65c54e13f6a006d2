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

// Observables on the position grid, relaxation-time extraction, the
// organisation weight and the Mott-insulator versus superfluid buildup.

#include <string>
#include <vector>

#include "selforg/dynamics.hpp"
#include "selforg/hilbert.hpp"
#include "selforg/params.hpp"

namespace selforg {

/// Midpoints Kx_j = -pi + 2 pi (j + 1/2) / G, j = 0..G-1, of (-pi, pi). The
/// branch cut at Kx = +-pi falls between two grid points, so the grid is
/// symmetric under Kx -> -Kx.
std::vector<double> position_grid(int grid_size = 256);

/// Single-particle operator whose expectation is sum_j Kx_j |psi(Kx_j)|^2 / G.
/// Exact (alias free) for 2M < grid_size.
LinOp position_operator(int M, int grid_size = 256);

/// Grid indicator of one half cell, (0, pi) for the right site and (-pi, 0)
/// for the left one. Both halves sum to the identity.
LinOp half_cell_operator(int M, bool right, int grid_size = 256);

/// <Kx> observable lifted to `basis`: the momentum factor for one particle, the
/// particle average (X_1 + X_2)/2 for the symmetric pair factor.
LinOp kx_observable(const BasisDescriptor& basis, int grid_size = 256);

/// <Kx> in the Bose-Hubbard basis, x_site (n_r - n_l) / N with x_site the
/// Wannier centre <r|Kx|r>.
LinOp bh_kx_observable(int N, int n_max, double x_site);

/// Probability of finding the two particles in opposite half cells, the full
/// model counterpart of n_l n_r. Basis: SymmetricMomentumPair x Fock.
LinOp pair_separation_op(int M, int n_max, int grid_size = 256);

/// Throws BasisMismatch when the state has no momentum factor.
double mean_kx(const StateVector& psi, int grid_size = 256);
double mean_kx(const DensityOperator& rho, int grid_size = 256);

enum class Regime { underdamped, overdamped };
std::string to_string(Regime r);

struct RelaxationFit {
  double tau = 0.0;
  double omega = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  Regime regime = Regime::underdamped;
  double residual = 0.0;  ///< RMS of |d| - |model| over the fit window
  double window_end = 0.0;
};

/// Fits d(t) = series - steady to A exp(-t/tau) cos(omega t + phi) when d
/// changes sign at least twice, otherwise |d| to A exp(-t/tau). The fit window
/// ends at the last time |d| reaches 5% of its maximum. Throws
/// UndefinedRelaxation for undamped input (tau > 10 t_max) and FitFailure when
/// the least-squares problem does not converge.
RelaxationFit relaxation_time(const std::vector<double>& times,
                              const std::vector<double>& series, double steady_value);

/// <n_l n_r> for a two-particle Bose-Hubbard state, or the pair separation
/// probability for a two-particle full-model state.
double organization_weight(const DensityOperator& rho);

struct BuildupComparison {
  std::vector<double> times;
  std::vector<double> photons_mi;
  std::vector<double> photons_sf;
  double probe_time = 0.0;  ///< 5 / kappa
  double mi_at_probe = 0.0;
  double sf_at_probe = 0.0;
  double mi_steady = 0.0;  ///< photon number after relaxing each run to stationarity
  double sf_steady = 0.0;
  double steady_distance = 0.0;  ///< trace distance of the two relaxed states
};

/// Two master-equation runs of the two-particle Bose-Hubbard model from the
/// Mott insulator and the superfluid state. The probe time is added to the
/// grid if absent.
BuildupComparison buildup_compare(const ModelParams& p, std::vector<double> t_grid,
                                  const EvolutionOptions& options = {});

}  // namespace selforg
