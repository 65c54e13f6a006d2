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

#include <array>
#include <cmath>
#include <random>

#include "selforg/error.hpp"
#include "selforg/hilbert.hpp"

using namespace selforg;

namespace {

LinOp diag_op(const BasisDescriptor& b, std::vector<double> d) {
  SparseMatrix m(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) m.insert(i, i) = d[i];
  return LinOp(b, m, true);
}

Vector random_vector(std::mt19937& g, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(nd(g), nd(g));
  return v.normalized();
}

LinOp random_op(std::mt19937& g, const BasisDescriptor& b) {
  const auto n = static_cast<Eigen::Index>(b.dimension());
  std::normal_distribution<double> nd;
  DenseMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(nd(g), nd(g));
  return LinOp(b, m.sparseView());
}

}  // namespace

TEST_CASE("basis dimensions and descriptors") {
  const BasisDescriptor b({MomentumModes{2}, FockSpace{3}});
  CHECK(b.dimension() == 20);
  CHECK(b.find<FockSpace>() == 1);
  CHECK(b.find<BHOccupation>() == b.size());
  CHECK(factor_dimension(BHOccupation{2}) == 3);
  CHECK(factor_dimension(SymmetricMomentumPair{2}) == 15);
  CHECK_THROWS_AS(require_same_basis(b, BasisDescriptor({FockSpace{3}}), "x"), BasisMismatch);
}

TEST_CASE("kron of identities and projectors") {
  const BasisDescriptor f1({FockSpace{1}}), f2({FockSpace{2}});
  const LinOp k = kron(identity(f1), identity(f2));
  CHECK(k.basis().dimension() == 6);
  CHECK((k.dense() - DenseMatrix::Identity(6, 6)).norm() == 0.0);

  const LinOp p = diag_op(f1, {0, 1});
  const LinOp pp = kron(p, p);
  DenseMatrix expected = DenseMatrix::Zero(4, 4);
  expected(3, 3) = 1.0;
  CHECK((pp.dense() - expected).norm() == 0.0);
}

TEST_CASE("kron acts factorwise against an explicit double loop") {
  const BasisDescriptor modes({MomentumModes{1}}), fock({FockSpace{3}});
  const LinOp n = diag_op(modes, {-1, 0, 1});
  const LinOp k = kron(n, identity(fock));
  // |m=1> x |n=2>: index (m + M) * 4 + n
  Vector x = Vector::Zero(12);
  x(2 * 4 + 2) = 1.0;
  const StateVector psi(k.basis(), x);
  const StateVector out = apply(k, psi);
  DenseMatrix oracle = DenseMatrix::Zero(12, 12);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 4; ++i) oracle(a * 4 + i, a * 4 + i) = double(a - 1);
  CHECK((out.amplitudes() - oracle * x).norm() == 0.0);
  CHECK(std::real(expectation(k, psi)) == doctest::Approx(1.0));
}

TEST_CASE("kron is associative") {
  std::mt19937 g(7);
  const LinOp a = random_op(g, BasisDescriptor({FockSpace{1}}));
  const LinOp b = random_op(g, BasisDescriptor({MomentumModes{1}}));
  const LinOp c = random_op(g, BasisDescriptor({BHOccupation{2}}));
  const LinOp l = kron(kron(a, b), c), r = kron(a, kron(b, c));
  CHECK(l.basis() == r.basis());
  CHECK((l.dense() - r.dense()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("ladder operators on Fock states") {
  const LinOp a = fock::annihilation(5);
  CHECK(apply(a, fock::basis_state(5, 0)).norm() == 0.0);
  const StateVector two = apply(a, fock::basis_state(5, 2));
  CHECK(std::abs(two.amplitudes()(1) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::real(expectation(fock::number(5), fock::basis_state(5, 3))) == 3.0);
  CHECK(std::real(expectation(fock::number(5), fock::basis_state(5, 0))) == 0.0);
}

TEST_CASE("annihilation on a truncated coherent state") {
  const cplx alpha(0.5, 0.0);
  const StateVector c = fock::coherent(20, alpha);
  const StateVector ac = apply(fock::annihilation(20), c);
  // Direct sum of the expansion: the top coefficient is lost by truncation.
  CHECK((ac.amplitudes() - alpha * c.amplitudes()).norm() < 1e-8);
}

TEST_CASE("photon number of a coherent state with |alpha|^2 = 0.025") {
  const StateVector c = fock::coherent(8, std::sqrt(0.025));
  const double n = std::real(expectation(fock::number(8), c)) / c.amplitudes().squaredNorm();
  CHECK(n == doctest::Approx(0.025).epsilon(1e-10));
}

TEST_CASE("commutator [a, a^dag] is the identity except in the top row") {
  const int n_max = 6;
  const DenseMatrix a = fock::annihilation(n_max).dense();
  const DenseMatrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < n_max; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-14);
  // Truncation artefact: the top Fock level gets -n_max instead of 1.
  CHECK(std::abs(comm(n_max, n_max) + double(n_max)) < 1e-14);
}

TEST_CASE("expectation of a state equals the trace with its projector") {
  std::mt19937 g(3);
  const BasisDescriptor b({MomentumModes{2}, FockSpace{2}});
  for (int k = 0; k < 5; ++k) {
    const StateVector psi(b, random_vector(g, 15));
    const LinOp a = random_op(g, b);
    CHECK(std::abs(expectation(a, psi) - expectation(a, DensityOperator::pure(psi))) < 1e-12);
  }
}

TEST_CASE("hermitian expectation values are real") {
  std::mt19937 g(5);
  const BasisDescriptor b({FockSpace{4}});
  const StateVector psi(b, random_vector(g, 5));
  const LinOp a = fock::annihilation(4);
  const LinOp x(b, a.matrix() + SparseMatrix(a.matrix().adjoint()), true);
  CHECK(std::abs(std::imag(expectation(x, psi))) < 1e-10);
}

TEST_CASE("normalize and basis mismatch") {
  StateVector psi(BasisDescriptor({FockSpace{1}}), Vector::Constant(2, cplx(3.0, 4.0)));
  psi.normalize();
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(apply(fock::annihilation(2), psi), BasisMismatch);
  CHECK_THROWS_AS(expectation(fock::number(2), psi), BasisMismatch);
  StateVector zero(BasisDescriptor({FockSpace{1}}), Vector::Zero(2));
  CHECK_THROWS_AS(zero.normalize(), NonFiniteValue);
}

TEST_CASE("hermitian flag is enforced") {
  SparseMatrix m(2, 2);
  m.insert(0, 1) = 1.0;
  CHECK_THROWS_AS(LinOp(BasisDescriptor({FockSpace{1}}), m, true), InvalidArgument);
  CHECK_NOTHROW(LinOp(BasisDescriptor({FockSpace{1}}), m, false));
}

TEST_CASE("partial trace of a product state") {
  const BasisDescriptor modes({MomentumModes{1}});
  Vector r(3);
  r << 0.6, cplx(0.0, 0.8), 0.0;
  const StateVector rs(modes, r);
  const DensityOperator rho = DensityOperator::pure(kron(rs, fock::basis_state(3, 0)));
  const std::array<std::size_t, 1> keep{0};
  const DensityOperator red = partial_trace(rho, keep);
  CHECK(red.basis() == modes);
  CHECK((red.matrix() - r * r.adjoint()).norm() < 1e-15);
}

TEST_CASE("partial trace of a maximally entangled pair") {
  const BasisDescriptor b({FockSpace{1}, FockSpace{1}});
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  const std::array<std::size_t, 1> keep{1};
  const DensityOperator red = partial_trace(DensityOperator::pure(StateVector(b, v)), keep);
  CHECK((red.matrix() - 0.5 * DenseMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(red.hermiticity_error() == 0.0);
}

TEST_CASE("partial trace of the organised mixture over the field") {
  // w |1,1; 0><...| + (1-w)/2 (|2,0; -b><...| + |0,2; b><...|), w = 0.4
  const int n_max = 10;
  const double w = 0.4;
  const BasisDescriptor b({BHOccupation{2}, FockSpace{n_max}});
  auto product = [&](int site, const StateVector& field) {
    Vector p = Vector::Zero(3);
    p(site) = 1.0;
    return kron(StateVector(BasisDescriptor({BHOccupation{2}}), p), field);
  };
  const cplx beta(0.3, -0.3);
  const auto s0 = product(1, fock::basis_state(n_max, 0));
  const auto sm = product(0, fock::coherent(n_max, -beta).normalized());
  const auto sp = product(2, fock::coherent(n_max, beta).normalized());
  const DenseMatrix m = w * DensityOperator::pure(s0).matrix() +
                        0.5 * (1 - w) * DensityOperator::pure(sm).matrix() +
                        0.5 * (1 - w) * DensityOperator::pure(sp).matrix();
  const std::array<std::size_t, 1> keep{0};
  const DensityOperator red = partial_trace(DensityOperator(b, m), keep);
  // Explicit construction: diagonal (0.3, 0.4, 0.3).
  DenseMatrix expected = DenseMatrix::Zero(3, 3);
  expected(0, 0) = 0.3;
  expected(1, 1) = 0.4;
  expected(2, 2) = 0.3;
  CHECK((red.matrix() - expected).norm() < 1e-12);
}

TEST_CASE("partial trace over everything returns the trace") {
  std::mt19937 g(11);
  const BasisDescriptor b({FockSpace{2}, FockSpace{1}});
  const DensityOperator rho = DensityOperator::pure(StateVector(b, random_vector(g, 6)));
  const DensityOperator t = partial_trace(rho, std::span<const std::size_t>());
  CHECK(std::abs(t.matrix()(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("partial trace rejects invalid indices") {
  const DensityOperator rho(BasisDescriptor({FockSpace{1}}), DenseMatrix::Identity(2, 2) / 2.0);
  const std::array<std::size_t, 1> bad{3};
  CHECK_THROWS_AS(partial_trace(rho, bad), InvalidArgument);
  const std::array<std::size_t, 2> twice{0, 0};
  CHECK_THROWS_AS(partial_trace(rho, twice), InvalidArgument);
}

TEST_CASE("lift places an operator on one factor") {
  const BasisDescriptor b({MomentumModes{1}, FockSpace{2}});
  const LinOp n = lift(fock::number(2), b, 1);
  CHECK((n.dense() - kron(identity(BasisDescriptor({MomentumModes{1}})), fock::number(2)).dense())
            .norm() == 0.0);
  CHECK_THROWS_AS(lift(fock::number(3), b, 1), BasisMismatch);
}

TEST_CASE("trace distance") {
  const BasisDescriptor b({FockSpace{1}});
  const auto p0 = DensityOperator::pure(fock::basis_state(1, 0));
  const auto p1 = DensityOperator::pure(fock::basis_state(1, 1));
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));
  CHECK(trace_distance(p0, p0) == doctest::Approx(0.0));
}
