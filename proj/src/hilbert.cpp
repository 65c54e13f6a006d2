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

#include "selforg/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "selforg/error.hpp"

namespace selforg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::size_t factor_dimension(const Factor& f) {
  return std::visit(
      overloaded{
          [](const MomentumModes& m) -> std::size_t { return 2 * m.cutoff + 1; },
          [](const FockSpace& s) -> std::size_t { return s.n_max + 1; },
          [](const BHOccupation& b) -> std::size_t { return b.particles + 1; },
          [](const SymmetricMomentumPair& p) -> std::size_t {
            const std::size_t d = 2 * p.cutoff + 1;
            return d * (d + 1) / 2;
          }},
      f);
}

std::string to_string(const Factor& f) {
  return std::visit(
      overloaded{[](const MomentumModes& m) {
                   return "MomentumModes(M=" + std::to_string(m.cutoff) + ")";
                 },
                 [](const FockSpace& s) {
                   return "FockSpace(n_max=" + std::to_string(s.n_max) + ")";
                 },
                 [](const BHOccupation& b) {
                   return "BHOccupation(N=" + std::to_string(b.particles) + ")";
                 },
                 [](const SymmetricMomentumPair& p) {
                   return "SymmetricMomentumPair(M=" + std::to_string(p.cutoff) +
                          ")";
                 }},
      f);
}

BasisDescriptor::BasisDescriptor(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  dimension_ = factors_.empty() ? 0 : 1;
  for (const auto& f : factors_) {
    const bool valid = std::visit(
        overloaded{[](const MomentumModes& m) { return m.cutoff >= 0; },
                   [](const FockSpace& s) { return s.n_max >= 0; },
                   [](const BHOccupation& b) { return b.particles >= 0; },
                   [](const SymmetricMomentumPair& p) { return p.cutoff >= 0; }},
        f);
    if (!valid) throw InvalidArgument("negative cutoff in " + selforg::to_string(f));
    dimension_ *= factor_dimension(f);
  }
}

std::vector<std::size_t> BasisDescriptor::factor_dimensions() const {
  std::vector<std::size_t> dims;
  dims.reserve(factors_.size());
  for (const auto& f : factors_) dims.push_back(factor_dimension(f));
  return dims;
}

BasisDescriptor BasisDescriptor::concat(const BasisDescriptor& other) const {
  std::vector<Factor> all = factors_;
  all.insert(all.end(), other.factors_.begin(), other.factors_.end());
  return BasisDescriptor(std::move(all));
}

std::string BasisDescriptor::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    os << selforg::to_string(factors_[i]);
  }
  return os.str();
}

void require_same_basis(const BasisDescriptor& a, const BasisDescriptor& b,
                        const char* what) {
  if (!(a == b))
    throw BasisMismatch(std::string(what) + ": basis " + a.to_string() +
                        " does not match " + b.to_string());
}

StateVector::StateVector(BasisDescriptor basis, Vector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension())
    throw InvalidArgument("state vector length " +
                          std::to_string(amplitudes_.size()) +
                          " does not match basis dimension " +
                          std::to_string(basis_.dimension()));
}

void StateVector::normalize() {
  const double n = amplitudes_.norm();
  if (n == 0.0 || !std::isfinite(n))
    throw NonFiniteValue("cannot normalize a state of norm " + std::to_string(n));
  amplitudes_ /= n;
}

StateVector StateVector::normalized() const {
  StateVector copy = *this;
  copy.normalize();
  return copy;
}

DensityOperator::DensityOperator(BasisDescriptor basis, DenseMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(basis_.dimension());
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw InvalidArgument("density matrix shape does not match basis dimension");
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return DensityOperator(psi.basis(),
                         psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityOperator::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
  const DenseMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double hermiticity_error(const SparseMatrix& a) {
  const SparseMatrix diff = a - SparseMatrix(a.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

LinOp::LinOp(BasisDescriptor basis, SparseMatrix matrix, bool hermitian)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), hermitian_(hermitian) {
  const auto d = static_cast<Eigen::Index>(basis_.dimension());
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw InvalidArgument("operator shape " + std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()) +
                          " does not match basis dimension " + std::to_string(d));
  matrix_.makeCompressed();
  if (hermitian_) {
    const double err = hermiticity_error(matrix_);
    if (err >= 1e-12)
      throw InvalidArgument("operator flagged hermitian deviates by " +
                            std::to_string(err));
  }
}

LinOp LinOp::adjoint() const {
  return LinOp(basis_, SparseMatrix(matrix_.adjoint()), hermitian_);
}

LinOp operator+(const LinOp& a, const LinOp& b) {
  require_same_basis(a.basis_, b.basis_, "operator sum");
  return LinOp(a.basis_, a.matrix_ + b.matrix_, a.hermitian_ && b.hermitian_);
}

LinOp operator-(const LinOp& a, const LinOp& b) {
  require_same_basis(a.basis_, b.basis_, "operator difference");
  return LinOp(a.basis_, a.matrix_ - b.matrix_, a.hermitian_ && b.hermitian_);
}

LinOp operator*(const LinOp& a, const LinOp& b) {
  require_same_basis(a.basis_, b.basis_, "operator product");
  SparseMatrix p = a.matrix_ * b.matrix_;
  p.prune(cplx(0.0));
  return LinOp(a.basis_, std::move(p), false);
}

LinOp operator*(double c, const LinOp& a) {
  return LinOp(a.basis_, c * a.matrix_, a.hermitian_);
}

LinOp operator*(cplx c, const LinOp& a) {
  return LinOp(a.basis_, c * a.matrix_, a.hermitian_ && c.imag() == 0.0);
}

LinOp identity(const BasisDescriptor& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  SparseMatrix id(d, d);
  id.setIdentity();
  return LinOp(basis, std::move(id), true);
}

LinOp kron(const LinOp& a, const LinOp& b) {
  SparseMatrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return LinOp(a.basis().concat(b.basis()), std::move(k),
               a.hermitian() && b.hermitian());
}

StateVector kron(const StateVector& a, const StateVector& b) {
  Vector k = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return StateVector(a.basis().concat(b.basis()), std::move(k));
}

LinOp lift(const LinOp& op, const BasisDescriptor& basis, std::size_t index) {
  if (index >= basis.size())
    throw InvalidArgument("factor index " + std::to_string(index) + " out of range");
  if (op.basis().size() != 1 || !(op.basis().factors()[0] == basis.factors()[index]))
    throw BasisMismatch("lift: operator basis " + op.basis().to_string() +
                        " does not match factor " + to_string(basis.factors()[index]));
  const auto dims = basis.factor_dimensions();
  Eigen::Index left = 1, right = 1;
  for (std::size_t i = 0; i < index; ++i) left *= static_cast<Eigen::Index>(dims[i]);
  for (std::size_t i = index + 1; i < dims.size(); ++i)
    right *= static_cast<Eigen::Index>(dims[i]);
  SparseMatrix il(left, left), ir(right, right);
  il.setIdentity();
  ir.setIdentity();
  SparseMatrix m = Eigen::kroneckerProduct(
                       SparseMatrix(Eigen::kroneckerProduct(il, op.matrix())), ir)
                       .eval();
  return LinOp(basis, std::move(m), op.hermitian());
}

StateVector apply(const LinOp& a, const StateVector& psi) {
  require_same_basis(a.basis(), psi.basis(), "apply");
  return StateVector(psi.basis(), a.matrix() * psi.amplitudes());
}

cplx expectation(const LinOp& a, const StateVector& psi) {
  require_same_basis(a.basis(), psi.basis(), "expectation");
  return psi.amplitudes().dot(a.matrix() * psi.amplitudes());
}

cplx expectation(const LinOp& a, const DensityOperator& rho) {
  require_same_basis(a.basis(), rho.basis(), "expectation");
  // Tr(A rho) = sum_ij A_ij rho_ji
  cplx sum = 0.0;
  const SparseMatrix& m = a.matrix();
  for (Eigen::Index i = 0; i < m.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(m, i); it; ++it)
      sum += it.value() * rho.matrix()(it.col(), it.row());
  return sum;
}

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const std::size_t> keep) {
  const auto& basis = rho.basis();
  const std::size_t nf = basis.size();
  std::vector<bool> kept(nf, false);
  for (std::size_t k : keep) {
    if (k >= nf)
      throw InvalidArgument("partial_trace: factor index " + std::to_string(k) +
                            " out of range for " + basis.to_string());
    if (kept[k]) throw InvalidArgument("partial_trace: repeated factor index");
    kept[k] = true;
  }
  const auto dims = basis.factor_dimensions();
  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t i = nf; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

  std::vector<Factor> kept_factors;
  std::vector<std::size_t> kept_idx, traced_idx;
  for (std::size_t i = 0; i < nf; ++i) {
    if (kept[i]) {
      kept_idx.push_back(i);
      kept_factors.push_back(basis.factors()[i]);
    } else {
      traced_idx.push_back(i);
    }
  }

  // Offsets into the full index contributed by a kept / traced multi-index.
  auto offsets = [&](const std::vector<std::size_t>& idx) {
    std::size_t count = 1;
    for (auto i : idx) count *= dims[i];
    std::vector<std::size_t> out(count, 0);
    for (std::size_t n = 0; n < count; ++n) {
      std::size_t rem = n, off = 0;
      for (std::size_t p = idx.size(); p-- > 0;) {
        off += (rem % dims[idx[p]]) * stride[idx[p]];
        rem /= dims[idx[p]];
      }
      out[n] = off;
    }
    return out;
  };
  const auto kofs = offsets(kept_idx);
  const auto tofs = offsets(traced_idx);

  const auto dk = static_cast<Eigen::Index>(kofs.size());
  DenseMatrix reduced = DenseMatrix::Zero(dk, dk);
  const DenseMatrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx s = 0.0;
      for (std::size_t t : tofs) s += m(kofs[a] + t, kofs[b] + t);
      reduced(a, b) = s;
    }
  if (kept_factors.empty()) {
    // Full trace: a one-dimensional "basis" is not representable, so return
    // the scalar as a 1x1 operator on an empty Fock factor.
    return DensityOperator(BasisDescriptor({FockSpace{0}}), reduced);
  }
  return DensityOperator(BasisDescriptor(std::move(kept_factors)), std::move(reduced));
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  require_same_basis(a.basis(), b.basis(), "trace_distance");
  const DenseMatrix d = a.matrix() - b.matrix();
  const DenseMatrix h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace fock {

namespace {
BasisDescriptor fock_basis(int n_max) {
  if (n_max < 0) throw InvalidArgument("negative Fock cutoff");
  return BasisDescriptor({FockSpace{n_max}});
}
}  // namespace

LinOp annihilation(int n_max) {
  const auto basis = fock_basis(n_max);
  SparseMatrix a(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a.insert(n - 1, n) = std::sqrt(double(n));
  return LinOp(basis, std::move(a));
}

LinOp creation(int n_max) { return annihilation(n_max).adjoint(); }

LinOp number(int n_max) {
  const auto basis = fock_basis(n_max);
  SparseMatrix n(n_max + 1, n_max + 1);
  for (int k = 1; k <= n_max; ++k) n.insert(k, k) = double(k);
  return LinOp(basis, std::move(n), true);
}

StateVector basis_state(int n_max, int n) {
  if (n < 0 || n > n_max) throw InvalidArgument("Fock index out of range");
  Vector v = Vector::Zero(n_max + 1);
  v(n) = 1.0;
  return StateVector(fock_basis(n_max), std::move(v));
}

StateVector coherent(int n_max, cplx alpha) {
  Vector v(n_max + 1);
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= n_max; ++n) {
    v(n) = c;
    c *= alpha / std::sqrt(double(n + 1));
  }
  return StateVector(fock_basis(n_max), std::move(v));
}

}  // namespace fock

}  // namespace selforg
