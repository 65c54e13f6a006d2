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

#include <Eigen/Eigenvalues>

#include "selforg/bose_hubbard.hpp"
#include "selforg/error.hpp"

using namespace selforg;

namespace {

double commutator_norm(const LinOp& a, const LinOp& b) {
  return (a.dense() * b.dense() - b.dense() * a.dense()).cwiseAbs().maxCoeff();
}

BHParams params(int N, double J, double Jtilde, int n_max = 6) {
  BHParams p;
  p.J = J;
  p.Jtilde = Jtilde;
  p.U0 = -0.5;
  p.N = N;
  p.DeltaC = N * p.U0 - p.kappa;
  p.n_max = n_max;
  return p;
}

}  // namespace

TEST_CASE("parameters derive from the lattice model") {
  const ModelParams m = ModelParams::defaults(2, -0.5);
  const BHParams p = BHParams::from_model(m);
  CHECK(p.J == doctest::Approx(-0.038373418106446).epsilon(1e-9));
  CHECK(p.Jtilde == doctest::Approx(std::sqrt(5.0) * 0.9066843057151153).epsilon(1e-9));
  CHECK(p.DeltaC == doctest::Approx(-11.0));
  CHECK(p.cavity_detuning() == doctest::Approx(-10.0));
  BHParams::Overrides o;
  o.J = 0.0;
  CHECK(BHParams::from_model(m, o).J == 0.0);
}

TEST_CASE("single particle at U0 = 0 has eigenvalues +-J") {
  const double J = -0.0383;
  const LinOp h = build_bh_hamiltonian(params(1, J, 0.0, 1));
  // Vacuum block: rows {|1,0;0>, |0,1;0>} = indices 0 and 2.
  const DenseMatrix d = h.dense();
  DenseMatrix block(2, 2);
  block << d(0, 0), d(0, 2), d(2, 0), d(2, 2);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(block);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-std::abs(J)));
  CHECK(es.eigenvalues()(1) == doctest::Approx(std::abs(J)));
}

TEST_CASE("site imbalance of the special states") {
  const LinOp imb = site_imbalance_op(2, 3);
  CHECK(std::real(expectation(imb, bh_state(BHState::mott_insulator, 2, 3))) == 0.0);
  CHECK(std::real(expectation(imb, bh_state(BHState::minus, 2, 3))) == 2.0);
  CHECK(std::real(expectation(imb, bh_state(BHState::plus, 2, 3))) == -2.0);
}

TEST_CASE("special states and density correlation") {
  const int n_max = 3;
  const LinOp nn = density_correlation_op(2, n_max);
  const StateVector sf = bh_state(BHState::superfluid, 2, n_max);
  CHECK(std::abs(sf.norm() - 1.0) < 1e-15);
  CHECK(std::abs(sf.amplitudes()(0 * (n_max + 1)) - 0.5) < 1e-15);
  CHECK(std::abs(sf.amplitudes()(1 * (n_max + 1)) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::real(expectation(nn, bh_state(BHState::mott_insulator, 2, n_max))) == 1.0);
  CHECK(std::real(expectation(nn, bh_state(BHState::plus, 2, n_max))) == 0.0);
  CHECK(std::real(expectation(nn, bh_state(BHState::minus, 2, n_max))) == 0.0);
  CHECK(std::real(expectation(nn, sf)) == doctest::Approx(0.5));
  // One particle: localized right is |0,1>.
  const StateVector r = bh_state(BHState::localized_right, 1, n_max);
  CHECK(std::abs(r.amplitudes()(1 * (n_max + 1)) - 1.0) < 1e-15);
  CHECK_THROWS_AS(bh_state(BHState::mott_insulator, 1, n_max), InvalidArgument);
  CHECK_THROWS_AS(density_correlation_op(1, n_max), InvalidArgument);
  CHECK_THROWS_AS(bh_state(BHState::superfluid, 3, n_max), InvalidArgument);
}

TEST_CASE("superfluid is the ground state of the hopping term") {
  const LinOp h = build_bh_hamiltonian(params(2, -0.04, 0.0, 1));
  const StateVector sf = bh_state(BHState::superfluid, 2, 1);
  CHECK(std::real(expectation(h, sf)) == doctest::Approx(2.0 * -0.04));
}

TEST_CASE("Bose-Hubbard symmetries") {
  for (int N : {1, 2}) {
    const LinOp h = build_bh_hamiltonian(params(N, -0.04, 2.0));
    CHECK(hermiticity_error(h.matrix()) < 1e-14);
    const LinOp total = site_occupation_op(Site::left, N, 6) + site_occupation_op(Site::right, N, 6);
    CHECK(commutator_norm(h, total) < 1e-14);
    CHECK(commutator_norm(h, bh_parity_op(N, 6)) < 1e-14);
  }
}
