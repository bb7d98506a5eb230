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

#include <cstdlib>
#include <string_view>

#include "pulsega/kernels.hpp"

namespace pulsega::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &scalar::gemm, &scalar::gemv,
                                 &scalar::axpy};
  return table;
}

const KernelTable* avx2_table() {
#if defined(PULSEGA_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", &avx2::gemm, &avx2::gemv, &avx2::axpy};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("PULSEGA_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") {
      return scalar_table();
    }
    if (const KernelTable* wide = avx2_table()) return *wide;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace pulsega::kernels
