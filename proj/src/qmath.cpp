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

#include "pulsega/qmath.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "pulsega/errors.hpp"
#include "pulsega/kernels.hpp"

namespace pulsega {

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw ArgumentError("ComplexMatrix: dimensions must be positive");
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw ArgumentError("ComplexMatrix: dimensions must be positive");
  }
  if (data_.size() != rows * cols) {
    throw ArgumentError("ComplexMatrix: entry count does not match dimensions");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0) {
    throw ArgumentError("ComplexMatrix: dimensions must be positive");
  }
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ArgumentError("ComplexMatrix: ragged rows");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out = *this;
  for (auto& v : out.data_) v = std::conj(v);
  return out;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) throw ArgumentError("trace: matrix is not square");
  cplx t{};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::norm1() const {
  double best = 0.0;
  for (std::size_t c = 0; c < cols_; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) s += std::abs((*this)(r, c));
    best = std::max(best, s);
  }
  return best;
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& v : data_) best = std::max(best, std::abs(v));
  return best;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::hermiticity_defect() const {
  if (!is_square()) throw ArgumentError("hermiticity_defect: matrix is not square");
  double worst = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw ArgumentError("matrix addition: dimension mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw ArgumentError("matrix subtraction: dimension mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::add_scaled(cplx s, const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw ArgumentError("add_scaled: dimension mismatch");
  }
  kernels::active().axpy(data_.size(), s, other.data_.data(), data_.data());
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matrix product: dimension mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active().gemm(a.rows(), b.cols(), a.cols(), a.data().data(),
                         b.data().data(), c.data().data());
  return c;
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw ArgumentError("apply: dimension mismatch");
  std::vector<cplx> y(a.rows());
  kernels::active().gemv(a.rows(), a.cols(), a.data().data(), x.data(), y.data());
  return y;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ArgumentError("max_abs_diff: dimension mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Operators

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, -kI}, {kI, 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix sigma_minus() { return {{0.0, 1.0}, {0.0, 0.0}}; }

ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw ArgumentError("tensor_product: empty factor list");
  for (const auto& f : factors) {
    if (!f.is_square()) throw ArgumentError("tensor_product: factors must be square");
  }
  ComplexMatrix acc = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const ComplexMatrix& b = factors[f];
    const std::size_t na = acc.rows();
    const std::size_t nb = b.rows();
    ComplexMatrix out(na * nb, na * nb);
    for (std::size_t ar = 0; ar < na; ++ar)
      for (std::size_t ac = 0; ac < na; ++ac) {
        const cplx s = acc(ar, ac);
        if (s == cplx{}) continue;
        for (std::size_t br = 0; br < nb; ++br)
          for (std::size_t bc = 0; bc < nb; ++bc)
            out(ar * nb + br, ac * nb + bc) = s * b(br, bc);
      }
    acc = std::move(out);
  }
  return acc;
}

ComplexMatrix tensor_product(std::initializer_list<ComplexMatrix> factors) {
  return tensor_product(std::span<const ComplexMatrix>(factors.begin(), factors.size()));
}

ComplexMatrix embed_operator(const ComplexMatrix& local,
                             std::span<const std::size_t> qubits,
                             std::size_t n_qubits) {
  const std::size_t k = qubits.size();
  if (k == 0 || !local.is_square() || local.rows() != (std::size_t{1} << k)) {
    throw ArgumentError("embed_operator: operator size does not match qubit count");
  }
  std::size_t mask = 0;
  for (std::size_t q : qubits) {
    if (q >= n_qubits) throw ArgumentError("embed_operator: qubit index out of range");
    const std::size_t bit = std::size_t{1} << (n_qubits - 1 - q);
    if (mask & bit) throw ArgumentError("embed_operator: repeated qubit");
    mask |= bit;
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  auto local_index = [&](std::size_t full) {
    std::size_t idx = 0;
    for (std::size_t q : qubits) idx = (idx << 1) | ((full >> (n_qubits - 1 - q)) & 1U);
    return idx;
  };
  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      out(r, c) = local(local_index(r), local_index(c));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix exponential

namespace {

// Pade [m/m] numerator coefficients for m in {3, 5, 7, 9, 13} and the
// 1-norm bounds below which each degree meets double precision.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152;

// Solves Q X = P in place (P becomes X) by LU with partial pivoting.
void lu_solve_in_place(ComplexMatrix q, ComplexMatrix& p) {
  const std::size_t n = q.rows();
  const auto& k = kernels::active();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(q(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(q(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw ArgumentError("matrix_exponential: singular Pade denominator");
    if (piv != col) {
      std::swap_ranges(&q(piv, 0), &q(piv, 0) + n, &q(col, 0));
      std::swap_ranges(&p(piv, 0), &p(piv, 0) + n, &p(col, 0));
    }
    const cplx inv = 1.0 / q(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = q(r, col) * inv;
      if (f == cplx{}) continue;
      k.axpy(n - col, -f, &q(col, col), &q(r, col));
      k.axpy(n, -f, &p(col, 0), &p(r, 0));
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const cplx inv = 1.0 / q(col, col);
    for (std::size_t c = 0; c < n; ++c) p(col, c) *= inv;
    for (std::size_t r = 0; r < col; ++r) {
      const cplx f = q(r, col);
      if (f != cplx{}) k.axpy(n, -f, &p(col, 0), &p(r, 0));
    }
  }
}

template <std::size_t N>
void pade_low(const ComplexMatrix& a, const std::array<double, N>& b,
              ComplexMatrix& u, ComplexMatrix& v) {
  const std::size_t n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix odd = b[1] * ident;
  ComplexMatrix even = b[0] * ident;
  ComplexMatrix power = a2;
  for (std::size_t j = 2; j < N; j += 2) {
    even.add_scaled(b[j], power);
    if (j + 1 < N) odd.add_scaled(b[j + 1], power);
    if (j + 2 < N) power = power * a2;
  }
  u = a * odd;
  v = std::move(even);
}

void pade13(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
  const auto& b = kPade13;
  const std::size_t n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  ComplexMatrix inner = b[13] * a6;
  inner.add_scaled(b[11], a4).add_scaled(b[9], a2);
  ComplexMatrix uu = a6 * inner;
  uu.add_scaled(b[7], a6).add_scaled(b[5], a4).add_scaled(b[3], a2).add_scaled(b[1], ident);
  u = a * uu;

  ComplexMatrix inner_v = b[12] * a6;
  inner_v.add_scaled(b[10], a4).add_scaled(b[8], a2);
  v = a6 * inner_v;
  v.add_scaled(b[6], a6).add_scaled(b[4], a4).add_scaled(b[2], a2).add_scaled(b[0], ident);
}

int squarings_for_norm(double norm) {
  if (norm <= kTheta13) return 0;
  return static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
}

}  // namespace

int expm_squarings(const ComplexMatrix& a) {
  if (!a.is_square()) throw ArgumentError("matrix_exponential: matrix is not square");
  return squarings_for_norm(a.norm1());
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  return matrix_exponential(a, 1000);
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a, int max_squarings) {
  if (!a.is_square()) throw ArgumentError("matrix_exponential: matrix is not square");
  if (!a.all_finite()) throw ArgumentError("matrix_exponential: non-finite entries");
  const double norm = a.norm1();
  ComplexMatrix u;
  ComplexMatrix v;
  int squarings = 0;
  if (norm <= kTheta[0]) {
    pade_low(a, kPade3, u, v);
  } else if (norm <= kTheta[1]) {
    pade_low(a, kPade5, u, v);
  } else if (norm <= kTheta[2]) {
    pade_low(a, kPade7, u, v);
  } else if (norm <= kTheta[3]) {
    pade_low(a, kPade9, u, v);
  } else {
    squarings = squarings_for_norm(norm);
    if (squarings > max_squarings) {
      std::ostringstream msg;
      msg << "matrix_exponential: " << squarings << " squarings exceed the limit of "
          << max_squarings;
      throw ArgumentError(msg.str());
    }
    ComplexMatrix scaled = a;
    scaled *= std::ldexp(1.0, -squarings);
    pade13(scaled, u, v);
  }
  ComplexMatrix p = v + u;
  lu_solve_in_place(v - u, p);
  for (int s = 0; s < squarings; ++s) p = p * p;
  return p;
}

// ---------------------------------------------------------------------------
// Eigendecomposition

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (!m.is_square()) throw ArgumentError("hermitian_eigen: matrix is not square");
  Eigen::MatrixXcd h = to_eigen(m);
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalInstabilityError(0.0, "hermitian_eigen: decomposition failed");
  }
  HermitianEigen out;
  const std::size_t n = m.rows();
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (std::size_t r = 0; r < n; ++r) {
      out.vectors(r, i) = solver.eigenvectors()(static_cast<Eigen::Index>(r),
                                                static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

ComplexMatrix rebuild_from_eigen(const HermitianEigen& eig,
                                 std::span<const double> new_values) {
  const std::size_t n = eig.vectors.rows();
  if (new_values.size() != n) throw ArgumentError("rebuild_from_eigen: size mismatch");
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) scaled(r, c) *= new_values[c];
  return scaled * eig.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw ArgumentError("PureState: empty amplitude vector");
  double norm2 = 0.0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  if (!(std::abs(norm2 - 1.0) <= 1e-12)) {
    throw ArgumentError("PureState: amplitudes do not have unit norm");
  }
}

PureState PureState::normalized(std::vector<cplx> amplitudes) {
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw ArgumentError("PureState: cannot normalize a zero or non-finite vector");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : amplitudes) a *= inv;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ArgumentError("PureState::basis: index out of range");
  std::vector<cplx> amps(dim);
  amps[index] = 1.0;
  return PureState(std::move(amps));
}

ComplexMatrix PureState::projector() const {
  const std::size_t n = dim();
  ComplexMatrix p(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) p(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
  return p;
}

cplx inner_product(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw ArgumentError("inner_product: dimension mismatch");
  cplx s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  ComplexMatrix p = psi.projector();
  return DensityMatrix(std::move(p));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

namespace {

void check_density(const ComplexMatrix& m, double tol, double* min_eig_out) {
  if (!m.is_square()) throw ArgumentError("density matrix must be square");
  if (!m.all_finite()) {
    throw ValidationError(ValidationError::Kind::NotFinite,
                          std::numeric_limits<double>::quiet_NaN(),
                          "density matrix has non-finite entries");
  }
  const double herm = m.hermiticity_defect();
  if (herm > tol) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian (defect " << herm << ")";
    throw ValidationError(ValidationError::Kind::Hermiticity, herm, msg.str());
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr << ", expected 1";
    throw ValidationError(ValidationError::Kind::Trace, tr, msg.str());
  }
  const HermitianEigen eig = hermitian_eigen(m);
  const double min_eig = eig.values.front();
  if (min_eig < -tol) {
    std::ostringstream msg;
    msg << "density matrix is not positive semidefinite (eigenvalue " << min_eig << ")";
    throw ValidationError(ValidationError::Kind::Positivity, min_eig, msg.str());
  }
  if (min_eig_out != nullptr) *min_eig_out = min_eig;
}

}  // namespace

DensityMatrix validate_density_matrix(const ComplexMatrix& m) {
  check_density(m, DensityMatrix::kTolerance, nullptr);
  return DensityMatrix(m);
}

DensityMatrix project_to_density_matrix(const ComplexMatrix& m, double tolerance) {
  double min_eig = 0.0;
  check_density(m, tolerance, &min_eig);
  ComplexMatrix h = m;
  const std::size_t n = m.rows();
  for (std::size_t r = 0; r < n; ++r) {
    h(r, r) = h(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const cplx avg = 0.5 * (m(r, c) + std::conj(m(c, r)));
      h(r, c) = avg;
      h(c, r) = std::conj(avg);
    }
  }
  if (min_eig < 0.0) {
    HermitianEigen eig = hermitian_eigen(h);
    for (auto& v : eig.values) v = std::max(v, 0.0);
    h = rebuild_from_eigen(eig, eig.values);
  }
  const double tr = h.trace().real();
  h *= 1.0 / tr;
  return DensityMatrix(std::move(h));
}

namespace {

// Eigenvalues at or below this are round-off from a singular state.
constexpr double kRankCutoff = 1e-13;

// B with B B^dag = m, keeping only eigenpairs above the rank cutoff.
Eigen::MatrixXcd psd_factor(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  const std::size_t n = m.rows();
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (eig.values[i] > kRankCutoff) kept.push_back(i);
  }
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const double s = std::sqrt(eig.values[kept[c]]);
    for (std::size_t r = 0; r < n; ++r) {
      b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s * eig.vectors(r, kept[c]);
    }
  }
  return b;
}

}  // namespace

// sqrt(F) is the trace norm of sqrt(rho) sqrt(sigma), which equals that of
// B^dag C for any factors rho = B B^dag, sigma = C C^dag.
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ArgumentError("state_fidelity: dimension mismatch");
  const Eigen::MatrixXcd b = psd_factor(rho.matrix());
  const Eigen::MatrixXcd c = psd_factor(sigma.matrix());
  if (b.cols() == 0 || c.cols() == 0) return 0.0;
  const Eigen::MatrixXcd overlap = b.adjoint() * c;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap);
  const double tr = svd.singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ArgumentError("trace_distance: dimension mismatch");
  const HermitianEigen eig = hermitian_eigen(rho.matrix() - sigma.matrix());
  double s = 0.0;
  for (double v : eig.values) s += std::abs(v);
  return 0.5 * s;
}

}  // namespace pulsega
