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

#ifndef MPX_GEOMETRY_HPP_
#define MPX_GEOMETRY_HPP_

// Divergence-generating functions, Bregman divergences and prox (mirror)
// steps over simple feasible sets and their products.

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace mpx {

using Vec = std::vector<double>;

struct Simplex {
  std::size_t n = 0;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct Box {
  Vec lower;
  Vec upper;
};

class FeasibleSet;

struct Product {
  std::vector<FeasibleSet> members;
};

class FeasibleSet {
 public:
  using Kind = std::variant<Simplex, Ball, Box, Product>;

  static FeasibleSet MakeSimplex(std::size_t n);
  static FeasibleSet MakeBall(Vec center, double radius);
  static FeasibleSet MakeBall(std::size_t dim, double radius);
  static FeasibleSet MakeBox(Vec lower, Vec upper);
  static FeasibleSet MakeProduct(std::vector<FeasibleSet> members);

  const Kind& kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }

  // Membership with absolute tolerance `tol` on every defining inequality.
  bool Contains(std::span<const double> x, double tol = 1e-9) const;

 private:
  explicit FeasibleSet(Kind kind);

  Kind kind_;
  std::size_t dimension_ = 0;
};

enum class GeometryKind { kEuclidean, kNegativeEntropy, kCubeNorm };

std::string_view GeometryName(GeometryKind kind);
std::optional<GeometryKind> ParseGeometry(std::string_view name);

// A divergence-generating function R applied blockwise over a (possibly
// product) feasible set. Per leaf block:
//   Euclidean        R(x) = 1/2 |x - c|^2          any leaf, l2 norm
//   NegativeEntropy  R(x) = sum x_i ln x_i          simplex only, l1 norm
//   CubeNorm         R(x) = 1/3 |x-c|^3 + 1/2 |x-c|^2   ball only, l2 norm
// Products use the sum of block functions; the product norm is the l2
// combination of block norms.
class BregmanGeometry {
 public:
  static constexpr double kEntropyFloor = 1e-12;

  BregmanGeometry(GeometryKind kind, FeasibleSet set,
                  std::optional<double> diameter_override = std::nullopt);

  GeometryKind kind() const { return kind_; }
  const FeasibleSet& set() const { return set_; }
  std::size_t dimension() const { return set_.dimension(); }
  double diameter() const { return diameter_; }

  double Divergence(std::span<const double> y, std::span<const double> x) const;

  // argmin_z { eta <d, z> + D_R(z, x) } over the set.
  Vec ProxStep(std::span<const double> x, std::span<const double> d,
               double eta) const;

  double StrongConvexityResidual(std::span<const double> y,
                                 std::span<const double> x) const;

  // Norm under which R is 1-strongly convex, and its dual.
  double Norm(std::span<const double> v) const;
  double DualNorm(std::span<const double> v) const;

  // argmin_{x in set} R(x).
  Vec Center() const;
  // Deterministic interior point away from the center.
  Vec SkewedPoint() const;

  // Random point of the set. For simplex blocks with floor > 0 a share of
  // the draws is pushed towards faces with coordinates down to `floor`.
  Vec Sample(std::mt19937_64& rng, double floor = 0.0) const;

  bool Contains(std::span<const double> x, double tol = 1e-9) const {
    return set_.Contains(x, tol);
  }

  struct Block {
    GeometryKind kind;
    std::size_t offset;
    std::size_t dim;
    FeasibleSet leaf;
  };
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  void Flatten(const FeasibleSet& set, std::size_t& offset);
  void CheckDim(std::span<const double> x) const;

  GeometryKind kind_;
  FeasibleSet set_;
  std::vector<Block> blocks_;
  double diameter_ = 0.0;
};

// Solves s^2 + s = target for s >= 0 by Newton's method safeguarded with
// bisection on [0, target]. Throws RootFindFailure when 200 iterations do not
// reach relative tolerance 1e-12.
double SolveCubeRadius(double target);

}  // namespace mpx

#endif  // MPX_GEOMETRY_HPP_
