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

#include "pulsega/kernels.hpp"

#include <algorithm>

namespace pulsega::kernels::scalar {

// Complex products are spelled out on (re, im) pairs: std::complex
// multiplication carries C99 Annex G NaN recovery that defeats inlining.

void gemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
          const cplx* b, cplx* c) {
  const auto* bd = reinterpret_cast<const double*>(b);
  auto* cd = reinterpret_cast<double*>(c);
  std::fill(c, c + m * n, cplx{});
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd + 2 * i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const double* brow = bd + 2 * p * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void gemv(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < m; ++i) {
    double re = 0.0;
    double im = 0.0;
    const cplx* row = a + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double ar = row[j].real();
      const double ai = row[j].imag();
      re += ar * x[j].real() - ai * x[j].imag();
      im += ar * x[j].imag() + ai * x[j].real();
    }
    y[i] = {re, im};
  }
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t j = 0; j < n; ++j) {
    const double xr = x[j].real();
    const double xi = x[j].imag();
    y[j] = {y[j].real() + ar * xr - ai * xi, y[j].imag() + ar * xi + ai * xr};
  }
}

}  // namespace pulsega::kernels::scalar
