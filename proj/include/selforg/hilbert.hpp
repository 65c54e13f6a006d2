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

// Basis-aware state vectors, density operators and sparse linear operators.
//
// Every object carries a BasisDescriptor: an ordered list of tensor factors.
// Amplitude index layout is row-major over the factors, i.e. the first factor
// is the most significant digit.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace selforg {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Plane waves e^{imKx}, m = -cutoff..cutoff.
struct MomentumModes {
  int cutoff = 0;
  friend bool operator==(const MomentumModes&, const MomentumModes&) = default;
};

/// Photon Fock states |0>..|n_max>.
struct FockSpace {
  int n_max = 0;
  friend bool operator==(const FockSpace&, const FockSpace&) = default;
};

/// Two-site occupations with n_l + n_r = particles. Index i holds
/// (n_l, n_r) = (particles - i, i), so for two particles the order is
/// |2,0>, |1,1>, |0,2>.
struct BHOccupation {
  int particles = 0;
  friend bool operator==(const BHOccupation&, const BHOccupation&) = default;
};

/// Bosonic symmetric subspace of two MomentumModes(cutoff) factors.
/// Basis vectors are labelled by mode pairs i <= j in lexicographic order.
struct SymmetricMomentumPair {
  int cutoff = 0;
  friend bool operator==(const SymmetricMomentumPair&,
                         const SymmetricMomentumPair&) = default;
};

using Factor =
    std::variant<MomentumModes, FockSpace, BHOccupation, SymmetricMomentumPair>;

std::size_t factor_dimension(const Factor& f);
std::string to_string(const Factor& f);

class BasisDescriptor {
 public:
  BasisDescriptor() = default;
  explicit BasisDescriptor(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::vector<std::size_t> factor_dimensions() const;

  /// Factors of *this followed by the factors of other.
  BasisDescriptor concat(const BasisDescriptor& other) const;

  /// Index of the first factor holding alternative T, or size() if absent.
  template <typename T>
  std::size_t find() const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (std::holds_alternative<T>(factors_[i])) return i;
    return factors_.size();
  }

  std::string to_string() const;

  friend bool operator==(const BasisDescriptor& a, const BasisDescriptor& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Factor> factors_;
  std::size_t dimension_ = 0;
};

void require_same_basis(const BasisDescriptor& a, const BasisDescriptor& b,
                        const char* what);

class StateVector {
 public:
  StateVector(BasisDescriptor basis, Vector amplitudes);

  const BasisDescriptor& basis() const { return basis_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  void normalize();
  StateVector normalized() const;

 private:
  BasisDescriptor basis_;
  Vector amplitudes_;
};

class DensityOperator {
 public:
  DensityOperator(BasisDescriptor basis, DenseMatrix matrix);
  static DensityOperator pure(const StateVector& psi);

  const BasisDescriptor& basis() const { return basis_; }
  const DenseMatrix& matrix() const { return matrix_; }

  cplx trace() const { return matrix_.trace(); }
  /// max |rho - rho^dagger|
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  BasisDescriptor basis_;
  DenseMatrix matrix_;
};

/// Sparse complex operator bound to a basis. When constructed with
/// hermitian = true the matrix is checked to be Hermitian within 1e-12.
class LinOp {
 public:
  LinOp(BasisDescriptor basis, SparseMatrix matrix, bool hermitian = false);

  const BasisDescriptor& basis() const { return basis_; }
  const SparseMatrix& matrix() const { return matrix_; }
  bool hermitian() const { return hermitian_; }
  std::size_t dimension() const { return basis_.dimension(); }

  LinOp adjoint() const;
  DenseMatrix dense() const { return DenseMatrix(matrix_); }

  friend LinOp operator+(const LinOp& a, const LinOp& b);
  friend LinOp operator-(const LinOp& a, const LinOp& b);
  friend LinOp operator*(const LinOp& a, const LinOp& b);
  friend LinOp operator*(double c, const LinOp& a);
  friend LinOp operator*(cplx c, const LinOp& a);

 private:
  BasisDescriptor basis_;
  SparseMatrix matrix_;
  bool hermitian_ = false;
};

/// max |A - A^dagger| over all entries.
double hermiticity_error(const SparseMatrix& a);

LinOp identity(const BasisDescriptor& basis);
LinOp kron(const LinOp& a, const LinOp& b);
StateVector kron(const StateVector& a, const StateVector& b);

/// Lift an operator on factor `index` of `basis` to the whole space.
LinOp lift(const LinOp& op, const BasisDescriptor& basis, std::size_t index);

/// Exact matrix-vector product; the result is not renormalized.
StateVector apply(const LinOp& a, const StateVector& psi);

cplx expectation(const LinOp& a, const StateVector& psi);
cplx expectation(const LinOp& a, const DensityOperator& rho);

/// Trace out every factor not listed in `keep`. The kept factors retain their
/// relative order.
DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const std::size_t> keep);

/// Trace norm distance 0.5 * ||a - b||_1.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

namespace fock {

LinOp annihilation(int n_max);
LinOp creation(int n_max);
LinOp number(int n_max);
StateVector basis_state(int n_max, int n);

/// Coherent-state expansion e^{-|a|^2/2} a^n / sqrt(n!) cut at n_max.
/// The truncated vector is returned as is (norm slightly below one).
StateVector coherent(int n_max, cplx alpha);

}  // namespace fock

}  // namespace selforg
