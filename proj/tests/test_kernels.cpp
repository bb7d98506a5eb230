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

#include <random>
#include <vector>

#include "doctest.h"
#include "pulsega/kernels.hpp"

namespace k = pulsega::kernels;
using k::cplx;

namespace {

std::vector<cplx> random_buffer(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

// Sprinkles exact zeros so the skip-zero path in the reference gemm runs.
void sparsify(std::mt19937_64& rng, std::vector<cplx>& v) {
  std::bernoulli_distribution zero(0.3);
  for (auto& x : v) {
    if (zero(rng)) x = 0.0;
  }
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Textbook triple loop, independent of both kernel families.
std::vector<cplx> naive_gemm(std::size_t m, std::size_t n, std::size_t kk,
                             const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> c(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t p = 0; p < kk; ++p) s += a[i * kk + p] * b[p * n + j];
      c[i * n + j] = s;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("scalar gemm matches the triple loop") {
  std::mt19937_64 rng(11);
  for (std::size_t m : {1u, 2u, 5u}) {
    for (std::size_t n : {1u, 3u, 4u, 7u}) {
      for (std::size_t kk : {1u, 2u, 6u}) {
        auto a = random_buffer(rng, m * kk);
        auto b = random_buffer(rng, kk * n);
        sparsify(rng, a);
        std::vector<cplx> c(m * n, cplx{99.0, 99.0});
        k::scalar::gemm(m, n, kk, a.data(), b.data(), c.data());
        CHECK(max_diff(c, naive_gemm(m, n, kk, a, b)) < 1e-13);
      }
    }
  }
}

TEST_CASE("active table is one of the known variants") {
  const auto& t = k::active();
  CHECK((t.name == "scalar" || t.name == "avx2"));
  CHECK(t.gemm != nullptr);
  CHECK(t.gemv != nullptr);
  CHECK(t.axpy != nullptr);
}

TEST_CASE("vector kernels agree with the scalar reference on odd and even shapes") {
  const k::KernelTable* wide = k::avx2_table();
  if (wide == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const k::KernelTable& ref = k::scalar_table();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 37);
    const std::size_t m = dim(rng), n = dim(rng), kk = dim(rng);
    auto a = random_buffer(rng, m * kk);
    auto b = random_buffer(rng, kk * n);
    if (trial % 3 == 0) sparsify(rng, a);

    std::vector<cplx> c_ref(m * n), c_wide(m * n);
    ref.gemm(m, n, kk, a.data(), b.data(), c_ref.data());
    wide->gemm(m, n, kk, a.data(), b.data(), c_wide.data());
    CHECK(max_diff(c_ref, c_wide) < 1e-12 * static_cast<double>(kk));

    auto x = random_buffer(rng, kk);
    std::vector<cplx> y_ref(m), y_wide(m);
    ref.gemv(m, kk, a.data(), x.data(), y_ref.data());
    wide->gemv(m, kk, a.data(), x.data(), y_wide.data());
    CHECK(max_diff(y_ref, y_wide) < 1e-12 * static_cast<double>(kk));

    const cplx alpha{std::uniform_real_distribution<double>(-2, 2)(rng), 0.5};
    auto y0 = random_buffer(rng, n);
    auto ya = y0, yb = y0;
    auto xs = random_buffer(rng, n);
    ref.axpy(n, alpha, xs.data(), ya.data());
    wide->axpy(n, alpha, xs.data(), yb.data());
    CHECK(max_diff(ya, yb) < 1e-14);
  }
}

TEST_CASE("kernels tolerate the 256-wide superoperator shape") {
  const k::KernelTable* wide = k::avx2_table();
  if (wide == nullptr) return;
  std::mt19937_64 rng(5);
  const std::size_t n = 256;
  auto a = random_buffer(rng, n * n);
  auto x = random_buffer(rng, n);
  std::vector<cplx> y1(n), y2(n);
  k::scalar_table().gemv(n, n, a.data(), x.data(), y1.data());
  wide->gemv(n, n, a.data(), x.data(), y2.data());
  CHECK(max_diff(y1, y2) < 1e-11);
}
