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
 * Dense complex arithmetic kernels with a portable scalar reference
 * implementation and vectorized variants chosen once at runtime.
 *
 * All buffers are row-major arrays of std::complex<double>, which the
 * standard guarantees to be laid out as interleaved (re, im) pairs.
 */

#include <complex>
#include <cstddef>
#include <string_view>

namespace pulsega::kernels {

using cplx = std::complex<double>;

/// C[M x N] = A[M x K] * B[K x N]. C must not alias A or B.
using GemmFn = void (*)(std::size_t m, std::size_t n, std::size_t k,
                        const cplx* a, const cplx* b, cplx* c);
/// y[M] = A[M x N] * x[N]. y must not alias A or x.
using GemvFn = void (*)(std::size_t m, std::size_t n, const cplx* a,
                        const cplx* x, cplx* y);
/// y[N] += alpha * x[N].
using AxpyFn = void (*)(std::size_t n, cplx alpha, const cplx* x, cplx* y);

struct KernelTable {
  std::string_view name;
  GemmFn gemm;
  GemvFn gemv;
  AxpyFn axpy;
};

/// Portable reference kernels. Always available.
const KernelTable& scalar_table();

/// AVX2+FMA kernels, or nullptr when the build or the CPU lacks them.
const KernelTable* avx2_table();

/// The table used by the library. Resolved on first call: the widest
/// variant the CPU supports, unless PULSEGA_KERNELS=scalar is set.
const KernelTable& active();

namespace scalar {
void gemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
          const cplx* b, cplx* c);
void gemv(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
}  // namespace scalar

#if defined(PULSEGA_BUILD_AVX2)
namespace avx2 {
void gemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
          const cplx* b, cplx* c);
void gemv(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
}  // namespace avx2
#endif

}  // namespace pulsega::kernels
