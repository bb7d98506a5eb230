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

#include <immintrin.h>

#include <algorithm>
#include <vector>

namespace pulsega::kernels::avx2 {

namespace {

// One __m256d holds two complex numbers (r0, i0, r1, i1).

inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// (sum of both complex lanes) of addsub(acc_re, acc_im).
inline cplx reduce_pair(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

// Wrapper so the vector element keeps the register type's alignment.
struct Lane {
  __m256d v;
};

}  // namespace

void gemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
          const cplx* b, cplx* c) {
  const auto* bd = reinterpret_cast<const double*>(b);
  auto* cd = reinterpret_cast<double*>(c);
  const std::size_t pairs = n / 2;
  const bool odd = (n % 2) != 0;
  thread_local std::vector<Lane> acc_r;
  thread_local std::vector<Lane> acc_i;
  acc_r.resize(pairs);
  acc_i.resize(pairs);

  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc_r.begin(), acc_r.end(), Lane{_mm256_setzero_pd()});
    std::fill(acc_i.begin(), acc_i.end(), Lane{_mm256_setzero_pd()});
    double tail_re = 0.0;
    double tail_im = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const __m256d vr = _mm256_set1_pd(ar);
      const __m256d vi = _mm256_set1_pd(ai);
      const double* brow = bd + 2 * p * n;
      for (std::size_t q = 0; q < pairs; ++q) {
        const __m256d bv = _mm256_loadu_pd(brow + 4 * q);
        acc_r[q].v = _mm256_fmadd_pd(vr, bv, acc_r[q].v);
        acc_i[q].v = _mm256_fmadd_pd(vi, swap_re_im(bv), acc_i[q].v);
      }
      if (odd) {
        const double br = brow[2 * (n - 1)];
        const double bi = brow[2 * (n - 1) + 1];
        tail_re += ar * br - ai * bi;
        tail_im += ar * bi + ai * br;
      }
    }
    double* crow = cd + 2 * i * n;
    for (std::size_t q = 0; q < pairs; ++q) {
      // even lanes: ar*br - ai*bi, odd lanes: ar*bi + ai*br
      _mm256_storeu_pd(crow + 4 * q, _mm256_addsub_pd(acc_r[q].v, acc_i[q].v));
    }
    if (odd) {
      crow[2 * (n - 1)] = tail_re;
      crow[2 * (n - 1) + 1] = tail_im;
    }
  }
}

void gemv(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < m; ++i) {
    const auto* row = reinterpret_cast<const double*>(a + i * n);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    for (std::size_t q = 0; q < pairs; ++q) {
      const __m256d av = _mm256_loadu_pd(row + 4 * q);
      const __m256d xv = _mm256_loadu_pd(xd + 4 * q);
      const __m256d xr = _mm256_movedup_pd(xv);
      const __m256d xi = _mm256_permute_pd(xv, 0b1111);
      acc1 = _mm256_fmadd_pd(av, xr, acc1);
      acc2 = _mm256_fmadd_pd(swap_re_im(av), xi, acc2);
    }
    cplx sum = reduce_pair(_mm256_addsub_pd(acc1, acc2));
    if (n % 2 != 0) {
      const cplx av = a[i * n + n - 1];
      const cplx xv = x[n - 1];
      sum += cplx{av.real() * xv.real() - av.imag() * xv.imag(),
                  av.real() * xv.imag() + av.imag() * xv.real()};
    }
    y[i] = sum;
  }
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  const __m256d vr = _mm256_set1_pd(alpha.real());
  const __m256d vi = _mm256_set1_pd(alpha.imag());
  const std::size_t pairs = n / 2;
  for (std::size_t q = 0; q < pairs; ++q) {
    const __m256d xv = _mm256_loadu_pd(xd + 4 * q);
    const __m256d prod =
        _mm256_addsub_pd(_mm256_mul_pd(vr, xv), _mm256_mul_pd(vi, swap_re_im(xv)));
    _mm256_storeu_pd(yd + 4 * q, _mm256_add_pd(_mm256_loadu_pd(yd + 4 * q), prod));
  }
  if (n % 2 != 0) {
    const cplx xv = x[n - 1];
    y[n - 1] += cplx{alpha.real() * xv.real() - alpha.imag() * xv.imag(),
                     alpha.real() * xv.imag() + alpha.imag() * xv.real()};
  }
}

}  // namespace pulsega::kernels::avx2
