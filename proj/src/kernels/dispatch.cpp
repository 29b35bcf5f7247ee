// Copyright 2026 The mpx Authors.
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

#include "mpx/kernels.hpp"

namespace mpx::kernels {

#ifdef MPX_HAVE_AVX2
namespace avx2 {
const KernelTable& Table();
}
#endif

const KernelTable* Avx2() {
#if defined(MPX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2::Table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& Active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("MPX_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return Scalar();
    if (const KernelTable* t = Avx2()) return *t;
    return Scalar();
  }();
  return table;
}

}  // namespace mpx::kernels
