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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "selforg/bose_hubbard.hpp"
#include "selforg/dynamics.hpp"
#include "selforg/error.hpp"
#include "selforg/rng.hpp"

using namespace selforg;

namespace {

BHParams bh(int N, double U0, double J = -0.038373418106446) {
  ModelParams m = ModelParams::defaults(N, U0);
  BHParams::Overrides o;
  o.J = J;
  return BHParams::from_model(m, o);
}

LinOp cavity_only(int n_max, double delta) {
  return -delta * fock::number(n_max);
}

}  // namespace

TEST_CASE("counter RNG streams are reproducible and distinct") {
  CounterRng a(1, 0), b(1, 0), c(1, 1), d(2, 0);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  CounterRng u(5, 5);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("jump channel caches op^dag op") {
  const JumpChannel c = cavity_decay(BasisDescriptor({BHOccupation{1}, FockSpace{3}}), 10.0);
  CHECK(c.rate_op.hermitian());
  CHECK((c.rate_op.dense() - 20.0 * lift(fock::number(3), c.op.basis(), 1).dense()).norm() < 1e-12);
  CHECK_THROWS_AS(cavity_decay(BasisDescriptor({BHOccupation{1}}), 10.0), BasisMismatch);
}

TEST_CASE("liouvillian of simple cavity states") {
  const int n_max = 4;
  const BasisDescriptor b({FockSpace{n_max}});
  const LinOp zero(b, SparseMatrix(n_max + 1, n_max + 1), true);
  const std::vector<JumpChannel> ch{cavity_decay(b, 10.0)};
  const auto vac = DensityOperator::pure(fock::basis_state(n_max, 0));
  CHECK(liouvillian_apply(zero, ch, vac).norm() == 0.0);
  const auto one = DensityOperator::pure(fock::basis_state(n_max, 1));
  const DenseMatrix d = liouvillian_apply(zero, ch, one);
  CHECK(std::abs(d.trace()) < 1e-12);
  CHECK(std::real(expectation(fock::number(n_max), DensityOperator(b, d))) == doctest::Approx(-20.0));
}

TEST_CASE("liouvillian is trace free and matches its matrix form") {
  const BHParams p = bh(2, -0.5);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const auto rho = DensityOperator::pure(bh_state(BHState::superfluid, 2, p.n_max));
  const DenseMatrix d = liouvillian_apply(h, ch, rho);
  CHECK(std::abs(d.trace()) < 1e-12);
  const SparseMatrix l = liouvillian_matrix(h, ch);
  const auto n = rho.matrix().rows();
  const Vector v = l * Eigen::Map<const Vector>(rho.matrix().data(), n * n);
  CHECK((Eigen::Map<const DenseMatrix>(v.data(), n, n) - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("damped cavity keeps a coherent state coherent") {
  const int n_max = 20;
  const double kappa = 10.0, delta = 3.0;
  const LinOp h = cavity_only(n_max, delta);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), kappa)};
  const cplx a0(1.0, 0.5);
  const auto rho0 = DensityOperator::pure(fock::coherent(n_max, a0).normalized());
  const LinOp a = fock::annihilation(n_max);
  const std::vector<double> grid{0.0, 0.05, 0.1};
  for (auto prop : {Propagator::spectral, Propagator::rk4}) {
    EvolutionOptions o;
    o.propagator = prop;
    o.keep_states = true;
    const MESolution sol = me_evolve(h, ch, rho0, {}, grid, o);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // H = -delta a^dag a: alpha(t) = alpha(0) exp(-(kappa - i delta) t)
      const cplx expected = a0 * std::exp(-(kappa - cplx(0.0, delta)) * grid[i]);
      CHECK(std::abs(expectation(a, sol.states[i]) - expected) < 1e-6);
    }
  }
}

TEST_CASE("master equation from the Mott insulator at U0 = 0") {
  const BHParams p = bh(2, 0.0);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const auto rho0 = DensityOperator::pure(bh_state(BHState::mott_insulator, 2, p.n_max));
  const std::vector<Observable> obs{{"nlnr", density_correlation_op(2, p.n_max)}};
  const auto grid = uniform_grid(40.0, 0.5);
  for (auto prop : {Propagator::spectral, Propagator::rk4}) {
    EvolutionOptions o;
    o.propagator = prop;
    const MESolution sol = me_evolve(h, ch, rho0, obs, grid, o);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(sol.series[0][i] - std::pow(std::cos(2.0 * p.J * grid[i]), 2)));
    CHECK(worst < 1e-6);
    CHECK(sol.trace_drift < 1e-8);
  }
}

TEST_CASE("trajectory without photons has no jumps") {
  const BHParams p = bh(1, 0.0);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const std::vector<Observable> obs{{"nl", site_occupation_op(Site::left, 1, p.n_max)}};
  const auto grid = uniform_grid(100.0, 1.0);
  const TrajectoryResult t = mcwf_trajectory(h, ch, bh_state(BHState::localized_right, 1, p.n_max),
                                             obs, grid, 3, 0);
  CHECK(t.jump_times.empty());
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(t["nl"][i] == doctest::Approx(std::pow(std::sin(p.J * grid[i]), 2)).epsilon(1e-9));
}

TEST_CASE("trajectories are deterministic and jump times increase") {
  const BHParams p = bh(1, -10.0);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const std::vector<Observable> obs{{"n", bh_photon_number_op(1, p.n_max)}};
  const auto grid = uniform_grid(5.0, 0.05);
  const auto psi0 = bh_state(BHState::localized_right, 1, p.n_max);
  for (auto prop : {Propagator::spectral, Propagator::rk4}) {
    EvolutionOptions o;
    o.propagator = prop;
    const auto a = mcwf_trajectory(h, ch, psi0, obs, grid, 42, 7, o);
    const auto b = mcwf_trajectory(h, ch, psi0, obs, grid, 42, 7, o);
    CHECK(a.jump_times == b.jump_times);
    CHECK(a.series == b.series);
    CHECK(a.jump_times.size() > 5);
    for (std::size_t i = 1; i < a.jump_times.size(); ++i) CHECK(a.jump_times[i] > a.jump_times[i - 1]);
    CHECK(a.jump_times.front() >= 0.0);
    CHECK(a.jump_times.back() <= grid.back());
    const auto& deficit = a["norm_deficit"];
    for (double x : deficit) {
      CHECK(x >= -1e-12);
      CHECK(x < 1.0);
    }
  }
}

TEST_CASE("spectral and RK4 trajectories agree") {
  const BHParams p = bh(2, -0.5);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const std::vector<Observable> obs{{"nlnr", density_correlation_op(2, p.n_max)}};
  const auto grid = uniform_grid(50.0, 0.5);
  const auto psi0 = bh_state(BHState::mott_insulator, 2, p.n_max);
  EvolutionOptions s, r;
  s.propagator = Propagator::spectral;
  r.propagator = Propagator::rk4;
  const auto a = mcwf_trajectory(h, ch, psi0, obs, grid, 9, 1, s);
  const auto b = mcwf_trajectory(h, ch, psi0, obs, grid, 9, 1, r);
  REQUIRE(a.jump_times.size() == b.jump_times.size());
  for (std::size_t i = 0; i < a.jump_times.size(); ++i)
    CHECK(a.jump_times[i] == doctest::Approx(b.jump_times[i]).epsilon(1e-4));
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(a["nlnr"][i] - b["nlnr"][i]) < 1e-4);
}

TEST_CASE("ensemble of one and deterministic ensembles") {
  const BHParams p = bh(1, 0.0);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const std::vector<Observable> obs{{"nl", site_occupation_op(Site::left, 1, p.n_max)}};
  const auto grid = uniform_grid(20.0, 1.0);
  const auto psi0 = bh_state(BHState::localized_right, 1, p.n_max);
  const auto one = mcwf_ensemble(h, ch, psi0, obs, grid, 1, 5);
  const auto single = mcwf_trajectory(h, ch, psi0, obs, grid, 5, 0);
  CHECK(one.mean[0] == single.series[0]);
  for (double e : one.std_error[0]) CHECK(e == 0.0);
  const auto many = mcwf_ensemble(h, ch, psi0, obs, grid, 8, 5, {}, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(many.mean[0][i] == doctest::Approx(single.series[0][i]).epsilon(1e-12));
    CHECK(many.std_error[0][i] < 1e-12);
  }
  CHECK_THROWS_AS(mcwf_ensemble(h, ch, psi0, obs, grid, 0, 5), InvalidArgument);
}

TEST_CASE("ensembles do not depend on the thread count") {
  const BHParams p = bh(1, -0.5);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const std::vector<Observable> obs{{"n", bh_photon_number_op(1, p.n_max)}};
  const auto grid = uniform_grid(10.0, 0.5);
  const auto psi0 = bh_state(BHState::localized_right, 1, p.n_max);
  const auto a = mcwf_ensemble(h, ch, psi0, obs, grid, 20, 77, {}, 1);
  const auto b = mcwf_ensemble(h, ch, psi0, obs, grid, 20, 77, {}, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.total_jumps == b.total_jumps);
}

TEST_CASE("trajectory failures carry their index") {
  const BHParams p = bh(1, -0.5);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  StateVector bad = bh_state(BHState::localized_right, 1, p.n_max);
  bad.amplitudes() *= 2.0;
  try {
    mcwf_ensemble(h, ch, bad, {}, {0.0, 1.0}, 3, 1);
    FAIL("expected an exception");
  } catch (const TrajectoryError& e) {
    CHECK(e.traj_index() == 0);
  }
}

TEST_CASE("frozen particle relaxes the field to the steady amplitude") {
  // J = 0 freezes the particle on the right site.
  ModelParams m = ModelParams::defaults(1, -0.5);
  BHParams::Overrides o;
  o.J = 0.0;
  const BHParams p = BHParams::from_model(m, o);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const LinOp a = lift(fock::annihilation(p.n_max), h.basis(), 1);
  EvolutionOptions opt;
  opt.keep_states = true;
  const MESolution sol = me_evolve(h, ch, DensityOperator::pure(bh_state(BHState::localized_right, 1, p.n_max)),
                                   {}, {0.0, 10.0 / p.kappa}, opt);
  const cplx alpha = cplx(0.0, p.Jtilde) / cplx(p.kappa, -p.cavity_detuning());
  CHECK(std::abs(expectation(a, sol.states.back()) - alpha) < 1e-3);
}

TEST_CASE("dark state identity") {
  const int n_max = 30;
  const cplx beta(0.6, -0.4);  // 2 alpha
  const auto minus = kron(StateVector(BasisDescriptor({BHOccupation{2}}), Vector::Unit(3, 0)),
                          fock::coherent(n_max, -beta));
  const auto plus = kron(StateVector(BasisDescriptor({BHOccupation{2}}), Vector::Unit(3, 2)),
                         fock::coherent(n_max, beta));
  const StateVector sum(minus.basis(), minus.amplitudes() + plus.amplitudes());
  const StateVector diff(minus.basis(), minus.amplitudes() - plus.amplitudes());
  const StateVector out = apply(lift(fock::annihilation(n_max), sum.basis(), 1), sum);
  CHECK((out.amplitudes() - (-beta) * diff.amplitudes()).norm() < 1e-12);
}

TEST_CASE("steady state of the single particle at weak coupling") {
  const BHParams p = bh(1, -0.005);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const SteadyState ss = steady_state(h, ch);
  CHECK_FALSE(ss.degenerate);
  CHECK(ss.residual < 1e-8);
  const std::array<std::size_t, 1> keep{0};
  const DensityOperator red = partial_trace(ss.rho, keep);
  CHECK(std::abs(red.matrix()(0, 0) - 0.5) < 0.01);
  CHECK(std::abs(red.matrix()(0, 1)) < 0.01);
  CHECK(std::abs(ss.rho.trace() - 1.0) < 1e-10);
  CHECK(ss.rho.hermiticity_error() < 1e-10);
  CHECK(ss.rho.min_eigenvalue() > -1e-8);
}

TEST_CASE("steady state without coupling is degenerate") {
  const BHParams p = bh(1, 0.0);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  CHECK(steady_state(h, ch).degenerate);
}

TEST_CASE("steady state solvers agree") {
  const BHParams p = bh(2, -0.5);
  const LinOp h = build_bh_hamiltonian(p);
  const std::vector<JumpChannel> ch{cavity_decay(h.basis(), p.kappa)};
  const SteadyState lin = steady_state(h, ch);
  SteadyStateOptions o;
  o.method = SteadyStateMethod::relaxation;
  o.residual_tolerance = 1e-12;
  const SteadyState rel = steady_state(h, ch, o);
  CHECK(trace_distance(lin.rho, rel.rho) < 1e-8);
  CHECK(stationarity_residual(h, ch, lin.rho) < 1e-8);
}

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(1.0, 0.25);
  REQUIRE(g.size() == 5);
  CHECK(g.back() == 1.0);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0), InvalidArgument);
}
