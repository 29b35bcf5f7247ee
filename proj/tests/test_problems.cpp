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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mpx/geometry.hpp"
#include "mpx/problems.hpp"
#include "test_util.hpp"

namespace mpx {
namespace {

const Matrix kRps = Matrix::FromRows({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
const Matrix kTwo = Matrix::FromRows({{1, -1}, {-1, 1}});

Vec Concat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Duality gap by enumerating the vertices of both simplices.
double VertexGap(const Matrix& a, const Vec& z, const Vec& y) {
  double best_col = -1e300, best_row = 1e300;
  for (std::size_t j = 0; j < a.cols; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) v += z[i] * a(i, j);
    best_col = std::max(best_col, v);
  }
  for (std::size_t i = 0; i < a.rows; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) v += a(i, j) * y[j];
    best_row = std::min(best_row, v);
  }
  return best_col - best_row;
}

TEST(Matrix, ApplyAndTranspose) {
  const Matrix m = Matrix::FromRows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(m.Apply(Vec{1, 0, -1}), (Vec{-2, -2}));
  EXPECT_EQ(m.ApplyTranspose(Vec{1, 1}), (Vec{5, 7, 9}));
  EXPECT_MPX_ERROR(m.Apply(Vec{1, 2}), ErrorCode::kDimensionMismatch);
  EXPECT_MPX_ERROR(Matrix::FromRows({{1, 2}, {3}}), ErrorCode::kDimensionMismatch);
}

TEST(MatrixGame, OperatorVanishesAtSymmetricEquilibrium) {
  const auto p = MakeMatrixGame(kTwo);
  const Vec f = p.Evaluate(Vec{0.5, 0.5, 0.5, 0.5});
  for (double v : f) EXPECT_EQ(v, 0.0);
}

TEST(MatrixGame, OperatorDefinition) {
  const auto p = MakeMatrixGame(kRps);
  const Vec z = {0.2, 0.3, 0.5}, y = {0.6, 0.1, 0.3};
  const Vec f = p.Evaluate(Concat(z, y));
  for (std::size_t i = 0; i < 3; ++i) {
    double ay = 0.0, atz = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      ay += kRps(i, j) * y[j];
      atz += kRps(j, i) * z[j];
    }
    EXPECT_NEAR(f[i], ay, 1e-15);
    EXPECT_NEAR(f[3 + i], -atz, 1e-15);
  }
}

TEST(MatrixGame, CatalogEquilibriaHaveZeroGap) {
  for (const char* name : {"matgame-rps", "matgame-2x2"}) {
    const auto p = MakeCatalogProblem(name);
    ASSERT_TRUE(p.known_solution().has_value());
    EXPECT_LE(p.Gap(*p.known_solution()), 1e-12);
    EXPECT_EQ(p.gap_kind(), GapKind::kSaddle);
  }
}

TEST(MatrixGame, SingletonGame) {
  const auto p = MakeMatrixGame(Matrix::FromRows({{1}}));
  EXPECT_EQ(p.Gap(Vec{1, 1}), 0.0);
  ASSERT_TRUE(p.known_solution().has_value());
  EXPECT_EQ(*p.known_solution(), (Vec{1, 1}));
}

TEST(MatrixGame, EmptyMatrixRejected) {
  EXPECT_MPX_ERROR(MakeMatrixGame(Matrix{}), ErrorCode::kEmptyMatrix);
}

TEST(MatrixGame, Constants) {
  const auto p = MakeMatrixGame(Matrix::FromRows({{0.5, -3.0}, {2.0, 1.0}}));
  EXPECT_DOUBLE_EQ(*p.Constant(RegularityTag::kLipschitzSmooth), 3.0);
  EXPECT_DOUBLE_EQ(*p.Constant(RegularityTag::kLipschitzBounded), 3.0 * std::sqrt(2.0));
}

TEST(SaddleGap, Examples) {
  EXPECT_EQ(SaddleGap(kTwo, Vec{0.5, 0.5}, Vec{0.5, 0.5}), 0.0);
  EXPECT_EQ(SaddleGap(kTwo, Vec{1, 0}, Vec{1, 0}), 2.0);
  EXPECT_MPX_ERROR(SaddleGap(kTwo, Vec{1, 0, 0}, Vec{1, 0}), ErrorCode::kDimensionMismatch);
}

TEST(SaddleGap, NonnegativeAndMatchesVertexEnumeration) {
  std::mt19937_64 rng(4);
  const BregmanGeometry g(GeometryKind::kNegativeEntropy,
                          FeasibleSet::MakeProduct({FeasibleSet::MakeSimplex(3), FeasibleSet::MakeSimplex(3)}));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a = kRps;
  for (double& v : a.data) v += 0.3 * normal(rng);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec x = g.Sample(rng);
    const Vec z(x.begin(), x.begin() + 3), y(x.begin() + 3, x.end());
    const double gap = SaddleGap(a, z, y);
    EXPECT_GE(gap, -1e-12);
    EXPECT_NEAR(gap, VertexGap(a, z, y), 1e-12);
  }
}

TEST(Quadratic, GradientExample) {
  const auto p = MakeQuadratic(Vec{0, 0}, 5.0);
  EXPECT_EQ(p.Evaluate(Vec{1, 2}), (Vec{1, 2}));
  EXPECT_NEAR(p.Gap(Vec{1, 2}), 2.5, 1e-15);
}

TEST(Quadratic, TargetOutsideBall) {
  const auto p = MakeQuadratic(Vec{3, 4}, 1.0);
  ASSERT_TRUE(p.optimal_value().has_value());
  EXPECT_NEAR(*p.optimal_value(), 8.0, 1e-14);  // 1/2 (5 - 1)^2
  EXPECT_NEAR(p.Gap(*p.known_solution()), 0.0, 1e-12);
}

TEST(MaxQuad, ActivePieceSubgradient) {
  const Matrix i2 = Matrix::FromRows({{1, 0}, {0, 1}});
  const Matrix two = Matrix::FromRows({{2, 0}, {0, 2}});
  const auto p = MakeMaxQuadratics({{i2, {0, 0}}, {two, {0, 0}}}, 2.0);
  EXPECT_EQ(p.Evaluate(Vec{1, 0}), (Vec{2, 0}));
}

TEST(MaxQuad, TieBreakPicksLowestIndex) {
  const Matrix i2 = Matrix::FromRows({{1, 0}, {0, 1}});
  const auto p = MakeMaxQuadratics({{i2, {1, 0}}, {i2, {0, 1}}}, 2.0);
  // Both pieces are equal on x1 = x2.
  EXPECT_EQ(p.Evaluate(Vec{0.5, 0.5}), (Vec{1.5, 0.5}));
}

TEST(MaxQuad, SinglePieceOptimum) {
  const auto p = MakeMaxQuadratics({{Matrix::FromRows({{1, 0}, {0, 1}}), {0, 0}}}, 1.0);
  EXPECT_NEAR(*p.optimal_value(), 0.0, 1e-12);
  for (double v : *p.known_solution()) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(MaxQuad, ShiftedPiecesOptimumIsZero) {
  // f = 1/2|x|^2 + max(0, -x1) >= 0 with equality only at the origin.
  const Matrix i2 = Matrix::FromRows({{1, 0}, {0, 1}});
  const auto p = MakeMaxQuadratics({{i2, {0, 0}}, {i2, {-1, 0}}}, 2.0);
  EXPECT_NEAR(*p.optimal_value(), 0.0, 1e-9);
}

TEST(MaxQuad, OracleFindsInteriorKink) {
  // f = max(1/2 x1^2 + x2, 1/2 x2^2 - x2) on the ball of radius 2 has
  // minimum 0 at the origin (both pieces are 0 there and the kink is at x2=0
  // to first order).
  const auto p = MakeCatalogProblem("maxquad");
  EXPECT_NEAR(*p.optimal_value(), 0.0, 1e-9);
  EXPECT_LE(p.Gap(*p.known_solution()), 1e-6);
}

TEST(MaxQuad, GapNonnegative) {
  std::mt19937_64 rng(8);
  const auto p = MakeCatalogProblem("maxquad");
  const BregmanGeometry g(GeometryKind::kCubeNorm, p.set());
  for (int rep = 0; rep < 1000; ++rep) EXPECT_GE(p.Gap(g.Sample(rng)), -1e-9);
}

TEST(MaxQuad, Errors) {
  EXPECT_MPX_ERROR(MakeMaxQuadratics({{Matrix::FromRows({{1, 0}, {0, -1}}), {0, 0}}}, 1.0),
                   ErrorCode::kNotPsd);
  EXPECT_MPX_ERROR(MakeMaxQuadratics({{Matrix::FromRows({{1, 2}, {0, 1}}), {0, 0}}}, 1.0),
                   ErrorCode::kNotPsd);
  Matrix i4;
  i4.rows = i4.cols = 4;
  i4.data.assign(16, 0.0);
  for (int k = 0; k < 4; ++k) i4.data[k * 5] = 1.0;
  EXPECT_MPX_ERROR(MakeMaxQuadratics({{i4, Vec(4, 0.0)}}, 1.0), ErrorCode::kTooLarge);
  EXPECT_NO_THROW(MakeMaxQuadratics({{i4, Vec(4, 0.0)}}, 1.0, "maxquad4", 0.0));
}

TEST(MaxQuad, BregmanBoundedConstantCertified) {
  const auto p = MakeCatalogProblem("maxquad");
  ASSERT_TRUE(p.Constant(RegularityTag::kBregmanBounded).has_value());
  const BregmanGeometry g(GeometryKind::kCubeNorm, p.set());
  const auto rep = CertifyRegularity(p, g, 10000, RegularityTag::kBregmanBounded);
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_TRUE(rep.entries[0].passed) << rep.entries[0].empirical << " vs " << rep.entries[0].declared;
  // A different sample stream must also stay within 1%.
  const auto other = CertifyRegularity(p, g, 5000, RegularityTag::kBregmanBounded, std::nullopt, 99);
  EXPECT_TRUE(other.entries[0].passed) << other.entries[0].empirical;
}

TEST(EntropicToy, Basics) {
  const auto p = MakeEntropicToy(2);
  EXPECT_EQ(*p.known_solution(), (Vec{0.5, 0.5}));
  EXPECT_NEAR(*p.optimal_value(), -std::log(2.0), 1e-15);
  const double eps = 1e-6;
  const double direct = (1 - eps) * std::log(1 - eps) + eps * std::log(eps) + std::log(2.0);
  EXPECT_NEAR(p.Gap(Vec{1 - eps, eps}), direct, 1e-12);
  EXPECT_NEAR(p.Gap(Vec{1 - eps, eps}), 0.693133, 1e-6);
  EXPECT_NEAR(p.Gap(Vec{1, 0}), std::log(2.0), 1e-15);
  EXPECT_EQ(p.Gap(Vec{0.5, 0.5}), 0.0);
}

TEST(EntropicToy, OperatorIsGradientOfObjective) {
  const auto p = MakeEntropicToy(10);
  const Vec f = p.Evaluate(Vec(10, 0.1));
  for (double v : f) EXPECT_NEAR(v, 1.0 - std::log(10.0), 1e-15);
  EXPECT_MPX_ERROR(p.Evaluate(Vec{1.2, -0.2, 0, 0, 0, 0, 0, 0, 0, 0}), ErrorCode::kBoundaryViolation);
  EXPECT_MPX_ERROR(MakeEntropicToy(1), ErrorCode::kDimensionTooSmall);
}

TEST(EntropicToy, LipschitzTagFailsBregmanTagHolds) {
  const auto p = MakeCatalogProblem("entropic");
  const BregmanGeometry g(GeometryKind::kNegativeEntropy, p.set());
  const double lbeta = *p.Constant(RegularityTag::kBregmanSmooth);
  const auto lip = CertifyRegularity(p, g, 10000, RegularityTag::kLipschitzSmooth, lbeta);
  EXPECT_FALSE(lip.AllPassed());
  const auto breg = CertifyRegularity(p, g, 10000, RegularityTag::kBregmanSmooth);
  EXPECT_TRUE(breg.AllPassed());
  EXPECT_FALSE(breg.entries[0].note.empty());
}

TEST(NPlayer, Examples) {
  const auto p = MakeNPlayerQuadratic(2, 0.5);
  EXPECT_EQ(p.Evaluate(Vec{1, 1}), (Vec{1.5, 1.5}));
  EXPECT_EQ(p.Gap(Vec{1, 1}), 3.0);
  EXPECT_EQ(p.Gap(Vec{0, 0}), 0.0);
  EXPECT_EQ(p.gap_kind(), GapKind::kResidual);
  EXPECT_MPX_ERROR(MakeNPlayerQuadratic(3, 1.0), ErrorCode::kCouplingTooLarge);
  EXPECT_MPX_ERROR(MakeNPlayerQuadratic(1, 0.1), ErrorCode::kDimensionTooSmall);
}

TEST(NPlayer, StrongCouplingStillMonotone) {
  const auto p = MakeNPlayerQuadratic(5, 0.9);
  const BregmanGeometry g(GeometryKind::kEuclidean, p.set());
  EXPECT_GE(MinMonotonicityResidual(p, g, 1000), 0.0);
}

TEST(Catalog, NamesAndUnknown) {
  EXPECT_EQ(CatalogNames().size(), 6u);
  EXPECT_MPX_ERROR(MakeCatalogProblem("nope"), ErrorCode::kUnknownProblem);
}

class CatalogProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogProperties, MonotoneGapsAndCertificates) {
  const auto p = MakeCatalogProblem(GetParam());
  EXPECT_EQ(p.name(), GetParam());
  const BregmanGeometry g(p.native_geometry(), p.set());
  EXPECT_GE(MinMonotonicityResidual(p, g, 1000), -1e-9);
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 1000; ++rep) EXPECT_GE(p.Gap(g.Sample(rng, 1e-9)), -1e-9);
  if (p.known_solution()) {
    EXPECT_TRUE(p.set().Contains(*p.known_solution()));
    EXPECT_LE(p.Gap(*p.known_solution()), 1e-6);
  }
  for (const auto& r : p.regularity()) {
    EXPECT_GT(r.constant, 0.0);
    EXPECT_TRUE(std::isfinite(r.constant));
  }
  const auto report = CertifyRegularity(p, g, 10000);
  for (const auto& e : report.entries) {
    EXPECT_TRUE(e.passed) << RegularityName(e.tag) << ": " << e.empirical << " > " << e.declared;
  }
}

INSTANTIATE_TEST_SUITE_P(All, CatalogProperties, ::testing::ValuesIn(CatalogNames()),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::replace(s.begin(), s.end(), '-', '_');
                           return s;
                         });

TEST(Certify, ZeroOperatorPassesEveryTag) {
  MonotoneProblem::Spec spec{
      .name = "zero",
      .set = FeasibleSet::MakeBall(2, 1.0),
      .op = [](std::span<const double> x) { return Vec(x.size(), 0.0); },
      .gap = [](std::span<const double>) { return 0.0; },
      .gap_kind = GapKind::kConvex,
      .native_geometry = GeometryKind::kEuclidean,
      .regularity = {},
      .known_solution = std::nullopt,
      .optimal_value = std::nullopt,
  };
  const MonotoneProblem p(spec);
  const BregmanGeometry g(GeometryKind::kEuclidean, p.set());
  for (auto tag : {RegularityTag::kLipschitzSmooth, RegularityTag::kLipschitzBounded,
                   RegularityTag::kBregmanSmooth, RegularityTag::kBregmanBounded}) {
    const auto rep = CertifyRegularity(p, g, 200, tag);
    EXPECT_TRUE(rep.AllPassed());
    EXPECT_EQ(rep.entries[0].empirical, 0.0);
  }
}

TEST(Certify, MatrixGameConstantsConfirmed) {
  const auto p = MakeCatalogProblem("matgame-rps");
  const BregmanGeometry g(GeometryKind::kNegativeEntropy, p.set());
  const auto lip = CertifyRegularity(p, g, 10000, RegularityTag::kLipschitzSmooth);
  EXPECT_TRUE(lip.AllPassed());
  const auto bnd = CertifyRegularity(p, g, 10000, RegularityTag::kLipschitzBounded);
  EXPECT_TRUE(bnd.AllPassed());
  EXPECT_GT(bnd.entries[0].empirical, 0.5 * bnd.entries[0].declared);
  EXPECT_MPX_ERROR(CertifyRegularity(p, g, 50), ErrorCode::kInvalidArgument);
}

TEST(Problem, DimensionChecks) {
  const auto p = MakeCatalogProblem("quadratic");
  EXPECT_MPX_ERROR(p.Evaluate(Vec{1, 2, 3}), ErrorCode::kDimensionMismatch);
  EXPECT_MPX_ERROR(p.Gap(Vec{1}), ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace mpx
