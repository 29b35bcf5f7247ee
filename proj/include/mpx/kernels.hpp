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

#ifndef MPX_KERNELS_HPP_
#define MPX_KERNELS_HPP_

// Dense arithmetic inner loops used by the geometry, problem and solver
// layers. Every kernel has a scalar reference implementation; an AVX2
// variant is selected at runtime when the CPU supports it. Setting the
// environment variable MPX_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace mpx::kernels {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*norm2_sq)(const double* a, std::size_t n);
  double (*diff_norm2_sq)(const double* a, const double* b, std::size_t n);
  double (*sum_abs)(const double* a, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  // y = A^T x, A row-major rows x cols
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
};

const KernelTable& Scalar();
// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* Avx2();
// The table chosen for this process.
const KernelTable& Active();

inline double Dot(std::span<const double> a, std::span<const double> b) {
  return Active().dot(a.data(), b.data(), a.size());
}
inline double Norm2Sq(std::span<const double> a) {
  return Active().norm2_sq(a.data(), a.size());
}
inline double DiffNorm2Sq(std::span<const double> a,
                          std::span<const double> b) {
  return Active().diff_norm2_sq(a.data(), b.data(), a.size());
}
inline double SumAbs(std::span<const double> a) {
  return Active().sum_abs(a.data(), a.size());
}
inline double MaxAbs(std::span<const double> a) {
  return Active().max_abs(a.data(), a.size());
}
inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace mpx::kernels

#endif  // MPX_KERNELS_HPP_
