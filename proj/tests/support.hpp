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

// Hand-rolled generators and independent oracles shared by the unit tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pulsega/qmath.hpp"

namespace testing {

using pulsega::ComplexMatrix;
using pulsega::cplx;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                   double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexMatrix m(rows, cols);
  for (auto& x : m.data()) x = {n(rng), n(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
  const ComplexMatrix g = random_matrix(rng, d, d, scale);
  ComplexMatrix h = g + g.adjoint();
  h *= 0.5;
  return h;
}

// Truncated Taylor series with scaling and squaring, kept separate from the
// library's Pade route.
inline ComplexMatrix taylor_expm(const ComplexMatrix& a) {
  const std::size_t d = a.rows();
  int s = 0;
  double norm = a.norm1();
  while (norm > 0.25) {
    norm *= 0.5;
    ++s;
  }
  ComplexMatrix x = a;
  x *= std::ldexp(1.0, -s);
  ComplexMatrix sum = ComplexMatrix::identity(d);
  ComplexMatrix term = ComplexMatrix::identity(d);
  for (int k = 1; k <= 30; ++k) {
    term = term * x;
    term *= 1.0 / k;
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t d) {
  ComplexMatrix h = random_hermitian(rng, d);
  h *= cplx{0.0, -1.0};
  return taylor_expm(h);
}

// G G^dag / Tr, full rank with probability one.
inline pulsega::DensityMatrix random_density(std::mt19937_64& rng, std::size_t d,
                                             std::size_t rank = 0) {
  if (rank == 0) rank = d;
  const ComplexMatrix g = random_matrix(rng, d, rank);
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return pulsega::validate_density_matrix(m);
}

inline pulsega::PureState random_pure(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> v(d);
  for (auto& x : v) x = {n(rng), n(rng)};
  return pulsega::PureState::normalized(std::move(v));
}

inline ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& m) {
  return u * m * u.adjoint();
}

}  // namespace testing
