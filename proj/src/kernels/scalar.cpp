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

#include <cmath>

#include "mpx/kernels.hpp"

namespace mpx::kernels {
namespace {

double DotScalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double Norm2SqScalar(const double* a, std::size_t n) {
  return DotScalar(a, a, n);
}

double DiffNorm2SqScalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double SumAbsScalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double MaxAbsScalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i]));
  return m;
}

void AxpyScalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void GemvScalar(const double* a, std::size_t rows, std::size_t cols,
                const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = DotScalar(a + i * cols, x, cols);
}

void GemvTScalar(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) AxpyScalar(x[i], a + i * cols, y, cols);
}

}  // namespace

const KernelTable& Scalar() {
  static const KernelTable table{
      "scalar",       DotScalar,  Norm2SqScalar, DiffNorm2SqScalar,
      SumAbsScalar,   MaxAbsScalar, AxpyScalar,  GemvScalar,
      GemvTScalar,
  };
  return table;
}

}  // namespace mpx::kernels
