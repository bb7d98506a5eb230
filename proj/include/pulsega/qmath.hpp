// Copyright 2026 The pulsega Authors
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

/**
 * @file
 * Dense complex matrices and the quantum-state types built on them.
 *
 * Qubit 0 is the most significant bit of a computational-basis index, so
 * tensor_product({A, B}) places A on qubit 0.
 */

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pulsega {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero-filled rows x cols matrix. Both dimensions must be positive.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Row-major entries; entries.size() must equal rows * cols.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }
  static ComplexMatrix diagonal(std::span<const cplx> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  cplx trace() const;

  /// Maximum absolute column sum.
  double norm1() const;
  double max_abs() const;
  double frobenius_norm() const;
  /// max |m_ij - conj(m_ji)|; requires a square matrix.
  double hermiticity_defect() const;
  bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);
  /// this += s * other
  ComplexMatrix& add_scaled(cplx s, const ComplexMatrix& other);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// y = A x
std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x);

/// Largest entrywise |a - b|; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Single-qubit operators.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// sigma^- = |0><1|
ComplexMatrix sigma_minus();

/// Kronecker product, left to right. Factors must be square.
ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors);
ComplexMatrix tensor_product(std::initializer_list<ComplexMatrix> factors);

/// Lift a k-qubit operator on `qubits` (first listed qubit is the most
/// significant local bit) into the full n-qubit space.
ComplexMatrix embed_operator(const ComplexMatrix& local,
                             std::span<const std::size_t> qubits,
                             std::size_t n_qubits);

/// exp(A) by scaling and squaring with diagonal Pade approximants.
ComplexMatrix matrix_exponential(const ComplexMatrix& a);

/// Same, failing with ArgumentError when more than `max_squarings`
/// halvings of the argument would be required.
ComplexMatrix matrix_exponential(const ComplexMatrix& a, int max_squarings);

/// Number of squarings matrix_exponential uses for `a`.
int expm_squarings(const ComplexMatrix& a);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // eigenvectors in columns
};

/// Eigendecomposition of the Hermitian part of m.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

/// V diag(f(lambda)) V^dagger.
ComplexMatrix rebuild_from_eigen(const HermitianEigen& eig,
                                 std::span<const double> new_values);

/// Normalized state vector.
class PureState {
 public:
  /// Amplitudes must have unit 2-norm within 1e-12.
  explicit PureState(std::vector<cplx> amplitudes);
  /// Rescales `amplitudes` to unit norm; the norm must be positive.
  static PureState normalized(std::vector<cplx> amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  cplx operator[](std::size_t i) const { return amplitudes_[i]; }

  /// |psi><psi|
  ComplexMatrix projector() const;

 private:
  std::vector<cplx> amplitudes_;
};

/// <a|b>
cplx inner_product(const PureState& a, const PureState& b);

/// A matrix known to be Hermitian, unit trace and positive semidefinite
/// within kDensityTolerance. Only obtainable through validation.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-9;

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  cplx operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  friend DensityMatrix validate_density_matrix(const ComplexMatrix& m);
  friend DensityMatrix project_to_density_matrix(const ComplexMatrix& m,
                                                 double tolerance);

  ComplexMatrix matrix_;
};

/// Checks finiteness, Hermiticity, unit trace and positivity, in that
/// order, throwing ValidationError for the first invariant that fails.
DensityMatrix validate_density_matrix(const ComplexMatrix& m);

/// Repairs round-off in a nearly valid state: Hermitizes, clamps negative
/// eigenvalues to zero and renormalizes the trace. Throws ValidationError
/// if any invariant is violated by more than `tolerance` beforehand.
DensityMatrix project_to_density_matrix(const ComplexMatrix& m, double tolerance);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace pulsega
