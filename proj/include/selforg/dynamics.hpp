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

// Quantum trajectories, Lindblad master equation and steady states for a
// Hamiltonian plus a set of jump channels.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selforg/hilbert.hpp"

namespace selforg {

struct JumpChannel {
  LinOp op;
  LinOp rate_op;  ///< op^dag op

  explicit JumpChannel(LinOp op);
};

/// sqrt(2 kappa) a acting on the (first) Fock factor of `basis`.
JumpChannel cavity_decay(const BasisDescriptor& basis, double kappa);

/// A Hermitian operator whose real expectation value is recorded.
struct Observable {
  std::string name;
  LinOp op;
};

/// H - (i/2) sum_k C_k^dag C_k.
SparseMatrix effective_hamiltonian(const LinOp& h, const std::vector<JumpChannel>& channels);

enum class Propagator { automatic, rk4, spectral };

struct EvolutionOptions {
  Propagator propagator = Propagator::automatic;
  /// RK4 step is safety / omega_fast with omega_fast the Gershgorin bound of
  /// the generator.
  double safety = 0.5;
  /// Largest generator dimension for which the exact eigendecomposition is used.
  std::size_t spectral_max_dim = 1000;
  /// Typical interval between recorded times. With the automatic choice the
  /// spectral method is skipped when RK4 over one interval is cheaper than a
  /// dense product. Zero: taken from the time grid.
  double interval_hint = 0.0;
  /// Relative tolerance of the jump-time root search, |norm^2 - r| <= tol * r.
  double jump_tolerance = 1e-6;
  /// Keep density-matrix snapshots at every grid time (master equation only).
  bool keep_states = false;
};

/// Non-unitary evolution exp(-i H_eff t) of a state vector, either by fixed
/// step RK4 or exactly through the eigendecomposition of H_eff. The
/// propagator works in its own coordinates: the state itself for RK4, the
/// eigenvector expansion coefficients for the spectral method.
class StatePropagator {
 public:
  StatePropagator(const SparseMatrix& h_eff, const EvolutionOptions& options);

  bool spectral() const { return spectral_; }
  /// Largest single advance; infinite for the spectral method.
  double max_step() const { return max_step_; }

  Vector to_coords(const Vector& psi) const;
  Vector from_coords(const Vector& c) const;
  double norm2(const Vector& c) const;
  /// Advances by tau <= max_step().
  Vector advance(const Vector& c, double tau) const;

 private:
  SparseMatrix h_eff_;
  bool spectral_ = false;
  double max_step_ = 0.0;
  Vector eigenvalues_;
  DenseMatrix vectors_;
  DenseMatrix gram_;
  Eigen::PartialPivLU<DenseMatrix> lu_;
};

struct TrajectoryResult {
  std::vector<double> times;
  /// Observable names followed by "norm_deficit" (1 - |psi|^2 of the
  /// unnormalized no-jump state since the last jump).
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;
  std::vector<double> jump_times;
  std::uint64_t seed = 0;
  std::uint64_t traj_index = 0;

  const std::vector<double>& operator[](const std::string& name) const;
};

struct EnsembleResult {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> mean;
  /// Sample standard deviation (n - 1) over sqrt(n); zero for one trajectory.
  std::vector<std::vector<double>> std_error;
  std::size_t n_traj = 0;
  std::size_t total_jumps = 0;
  std::vector<TrajectoryResult> trajectories;

  std::size_t index_of(const std::string& name) const;
};

TrajectoryResult mcwf_trajectory(const LinOp& h, const std::vector<JumpChannel>& channels,
                                 const StateVector& psi0,
                                 const std::vector<Observable>& observables,
                                 const std::vector<double>& t_grid, std::uint64_t seed,
                                 std::uint64_t traj_index,
                                 const EvolutionOptions& options = {});

/// Same as mcwf_trajectory with a prebuilt propagator (shared across threads).
TrajectoryResult mcwf_trajectory(const StatePropagator& prop,
                                 const std::vector<JumpChannel>& channels,
                                 const StateVector& psi0,
                                 const std::vector<Observable>& observables,
                                 const std::vector<double>& t_grid, std::uint64_t seed,
                                 std::uint64_t traj_index,
                                 const EvolutionOptions& options = {});

/// Trajectories 0..n_traj-1 on `threads` workers (0: hardware concurrency),
/// reduced in index order. Failures are rethrown as TrajectoryError for the
/// lowest failing index.
EnsembleResult mcwf_ensemble(const LinOp& h, const std::vector<JumpChannel>& channels,
                             const StateVector& psi0,
                             const std::vector<Observable>& observables,
                             const std::vector<double>& t_grid, std::size_t n_traj,
                             std::uint64_t seed, const EvolutionOptions& options = {},
                             unsigned threads = 1);

/// d rho / dt = -i[H, rho] + sum_k (C_k rho C_k^dag - {C_k^dag C_k, rho}/2).
DenseMatrix liouvillian_apply(const LinOp& h, const std::vector<JumpChannel>& channels,
                              const DensityOperator& rho);

/// Column-major vectorized Liouvillian, vec(L rho) = L vec(rho).
SparseMatrix liouvillian_matrix(const LinOp& h, const std::vector<JumpChannel>& channels);

struct MESolution {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;
  std::vector<DensityOperator> states;  ///< only with keep_states
  std::optional<DensityOperator> final_state;
  /// max |Tr rho - 1| over the grid.
  double trace_drift = 0.0;
  bool spectral = false;

  const std::vector<double>& operator[](const std::string& name) const;
};

/// Integrates the master equation on t_grid (t_grid[0] is the time of rho0).
/// Throws ToleranceFailure if the trace drifts by more than 1e-8.
MESolution me_evolve(const LinOp& h, const std::vector<JumpChannel>& channels,
                     const DensityOperator& rho0,
                     const std::vector<Observable>& observables,
                     const std::vector<double>& t_grid, const EvolutionOptions& options = {});

enum class SteadyStateMethod { linear_solve, relaxation, time_integration };

struct SteadyStateOptions {
  SteadyStateMethod method = SteadyStateMethod::linear_solve;
  /// Start for relaxation and time integration; maximally mixed if absent.
  std::optional<DensityOperator> initial;
  /// Stop when ||L rho||_1 falls below this.
  double residual_tolerance = 1e-8;
  double max_time = 1e7;
  /// Uniqueness threshold on the smallest singular value of the bordered
  /// Liouvillian.
  double gap_tolerance = 1e-10;
  EvolutionOptions evolution{};
};

struct SteadyState {
  DensityOperator rho;
  /// Set when the stationary state is not unique; rho is then one of them.
  bool degenerate = false;
  double gap_estimate = 0.0;
  double residual = 0.0;  ///< ||L rho||_1
  SteadyStateMethod method = SteadyStateMethod::linear_solve;
};

SteadyState steady_state(const LinOp& h, const std::vector<JumpChannel>& channels,
                         const SteadyStateOptions& options = {});

/// Trace norm of L rho.
double stationarity_residual(const LinOp& h, const std::vector<JumpChannel>& channels,
                             const DensityOperator& rho);

/// Time grid t0, t0 + dt, ..., up to t_max (inclusive within dt * 1e-9).
std::vector<double> uniform_grid(double t_max, double dt, double t0 = 0.0);

}  // namespace selforg
