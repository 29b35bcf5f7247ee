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

#ifndef MPX_PROBLEMS_HPP_
#define MPX_PROBLEMS_HPP_

// Monotone variational inequality instances: operators, regularity tags and
// exact gap evaluators.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpx/geometry.hpp"

namespace mpx {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;  // row-major

  static Matrix FromRows(const std::vector<Vec>& rows);
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  Vec Apply(std::span<const double> x) const;           // A x
  Vec ApplyTranspose(std::span<const double> x) const;  // A^T x
};

enum class RegularityTag {
  kLipschitzSmooth,
  kLipschitzBounded,
  kBregmanSmooth,
  kBregmanBounded,
};

std::string_view RegularityName(RegularityTag tag);

struct RegularityClass {
  RegularityTag tag;
  double constant;
};

enum class GapKind { kConvex, kSaddle, kResidual };

std::string_view GapKindName(GapKind kind);

using Operator = std::function<Vec(std::span<const double>)>;
using ScalarFn = std::function<double(std::span<const double>)>;

class MonotoneProblem {
 public:
  struct Spec {
    std::string name;
    FeasibleSet set;
    Operator op;
    ScalarFn gap;
    GapKind gap_kind;
    GeometryKind native_geometry;
    std::vector<RegularityClass> regularity;
    std::optional<Vec> known_solution;
    std::optional<double> optimal_value;
  };

  explicit MonotoneProblem(Spec spec);

  const std::string& name() const { return spec_.name; }
  const FeasibleSet& set() const { return spec_.set; }
  std::size_t dimension() const { return spec_.set.dimension(); }
  GapKind gap_kind() const { return spec_.gap_kind; }
  GeometryKind native_geometry() const { return spec_.native_geometry; }
  const std::vector<RegularityClass>& regularity() const { return spec_.regularity; }
  std::optional<double> Constant(RegularityTag tag) const;
  const std::optional<Vec>& known_solution() const { return spec_.known_solution; }
  std::optional<double> optimal_value() const { return spec_.optimal_value; }

  // F(x). Throws DimensionMismatch; BoundaryViolation for operators singular
  // on the boundary.
  Vec Evaluate(std::span<const double> x) const;
  // Nonnegative suboptimality / duality residual at x.
  double Gap(std::span<const double> x) const;

 private:
  Spec spec_;
};

// Bilinear saddle point min_z max_y z^T A y on Simplex(m) x Simplex(n).
MonotoneProblem MakeMatrixGame(const Matrix& a, std::string name = "matgame",
                               std::optional<Vec> equilibrium = std::nullopt);

// max_j (A^T z)_j - min_i (A y)_i, exact.
double SaddleGap(const Matrix& a, std::span<const double> z,
                 std::span<const double> y);

// f(x) = 1/2 |x - target|^2 on the ball of given radius around the origin.
MonotoneProblem MakeQuadratic(Vec target, double radius,
                              std::string name = "quadratic");

struct QuadraticPiece {
  Matrix q;  // symmetric PSD
  Vec b;
};

// f(x) = max_i { 1/2 x^T Q_i x + b_i^T x } on the ball of `radius` around the
// origin. F is the gradient of the lowest-index piece within 1e-12 of the max.
// f* comes from a dense grid plus projected-subgradient polish when dim <= 3;
// larger problems need `optimal_value`.
MonotoneProblem MakeMaxQuadratics(std::vector<QuadraticPiece> pieces, double radius,
                                  std::string name = "maxquad",
                                  std::optional<double> optimal_value = std::nullopt);

// min sum_i x_i ln x_i over Simplex(n); F(x) = ln x + 1.
MonotoneProblem MakeEntropicToy(std::size_t n, std::string name = "entropic");

// N players with scalar actions in [-1, 1];
// f_i = 1/2 x_i^2 + kappa x_i mean_{j != i} x_j.
MonotoneProblem MakeNPlayerQuadratic(std::size_t players, double coupling,
                                     std::string name = "nplayer");

// Catalog: matgame-rps, matgame-2x2, quadratic, maxquad, entropic, nplayer.
MonotoneProblem MakeCatalogProblem(std::string_view name);
std::vector<std::string> CatalogNames();

struct RegularityCertificate {
  RegularityTag tag;
  double declared;
  double empirical;  // maximal sampled ratio
  bool passed;       // empirical <= 1.01 * declared
  std::string note;
};

struct CertificationReport {
  std::vector<RegularityCertificate> entries;
  bool AllPassed() const;
};

// Samples `samples` pairs from the geometry's set (interior floor 1e-6 on
// simplex blocks) and evaluates the defining ratio of each tag. With `tag`
// set, only that inequality is certified against `declared` (or the
// problem's own constant when `declared` is empty).
CertificationReport CertifyRegularity(const MonotoneProblem& p,
                                      const BregmanGeometry& g, std::size_t samples,
                                      std::optional<RegularityTag> tag = std::nullopt,
                                      std::optional<double> declared = std::nullopt,
                                      std::uint64_t seed = 0x5eed);

// min over sampled pairs of <x - y, F(x) - F(y)>.
double MinMonotonicityResidual(const MonotoneProblem& p, const BregmanGeometry& g,
                               std::size_t samples, std::uint64_t seed = 7);

}  // namespace mpx

#endif  // MPX_PROBLEMS_HPP_
