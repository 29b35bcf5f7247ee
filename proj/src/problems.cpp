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

#include "mpx/problems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "mpx/error.hpp"
#include "mpx/kernels.hpp"

namespace mpx {
namespace {

void CheckSize(std::span<const double> x, std::size_t n) {
  if (x.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(n) + " coordinates, got " +
                    std::to_string(x.size()));
  }
}

Vec Difference(std::span<const double> a, std::span<const double> b) {
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

std::pair<Vec, Vec> SamplePair(const BregmanGeometry& g, std::mt19937_64& rng,
                               double floor) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec x = g.Sample(rng, floor);
  if (unif(rng) < 0.5) return {std::move(x), g.Sample(rng, floor)};
  const double scale = std::pow(10.0, -1.0 - 5.0 * unif(rng));
  Vec noise(x.size());
  for (double& v : noise) v = scale * normal(rng);
  Vec y = g.ProxStep(x, noise, 1.0);
  return {std::move(x), std::move(y)};
}

double Ratio(RegularityTag tag, const MonotoneProblem& p, const BregmanGeometry& g,
             std::span<const double> x, std::span<const double> y) {
  const Vec diff = Difference(x, y);
  const double dist = g.Norm(diff);
  switch (tag) {
    case RegularityTag::kLipschitzBounded:
      return g.DualNorm(p.Evaluate(x));
    case RegularityTag::kLipschitzSmooth: {
      if (dist <= 0.0) return 0.0;
      const Vec df = Difference(p.Evaluate(x), p.Evaluate(y));
      return g.DualNorm(df) / dist;
    }
    case RegularityTag::kBregmanSmooth: {
      const double div = g.Divergence(y, x);
      if (div <= 0.0) return 0.0;
      const Vec df = Difference(p.Evaluate(y), p.Evaluate(x));
      return g.DualNorm(df) / std::sqrt(2.0 * div);
    }
    case RegularityTag::kBregmanBounded: {
      const double div = g.Divergence(y, x);
      if (div <= 0.0 || dist <= 0.0) return 0.0;
      return g.DualNorm(p.Evaluate(x)) * dist / std::sqrt(div);
    }
  }
  return 0.0;
}

constexpr double kCertifyFloor = 1e-6;
constexpr std::uint64_t kCertifySeed = 0x5eed;
constexpr std::size_t kConstructionSamples = 10000;

double MaxSampledRatio(RegularityTag tag, const MonotoneProblem& p,
                       const BregmanGeometry& g, std::size_t samples,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto [x, y] = SamplePair(g, rng, kCertifyFloor);
    best = std::max(best, Ratio(tag, p, g, x, y));
  }
  return best;
}

double PieceValue(const QuadraticPiece& piece, std::span<const double> x) {
  const std::size_t n = x.size();
  const double* q = piece.q.data.data();
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += q[i * n + j] * x[j];
    quad += x[i] * row;
    lin += piece.b[i] * x[i];
  }
  return 0.5 * quad + lin;
}

std::size_t ActivePiece(const std::vector<QuadraticPiece>& pieces,
                        std::span<const double> x) {
  Vec values(pieces.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    values[i] = PieceValue(pieces[i], x);
    best = std::max(best, values[i]);
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (values[i] >= best - 1e-12) return i;
  }
  return 0;
}

double MaxQuadValue(const std::vector<QuadraticPiece>& pieces,
                    std::span<const double> x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& piece : pieces) best = std::max(best, PieceValue(piece, x));
  return best;
}

Vec MaxQuadSubgradient(const std::vector<QuadraticPiece>& pieces,
                       std::span<const double> x) {
  const QuadraticPiece& piece = pieces[ActivePiece(pieces, x)];
  Vec g = piece.q.Apply(x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += piece.b[i];
  return g;
}

// Dense grid over the ball followed by projected-subgradient polish.
std::pair<double, Vec> MaxQuadOracle(const std::vector<QuadraticPiece>& pieces,
                                     double radius, std::size_t dim) {
  const std::size_t half = dim <= 2 ? 2000 : 100;
  const double h = radius / static_cast<double>(half);
  const std::size_t per_axis = 2 * half + 1;
  double best = std::numeric_limits<double>::infinity();
  Vec best_x(dim, 0.0);
  Vec x(dim);
  std::vector<std::size_t> idx(dim, 0);
  const double r_sq = radius * radius;
  for (;;) {
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = (static_cast<double>(idx[k]) - static_cast<double>(half)) * h;
      norm_sq += x[k] * x[k];
    }
    if (norm_sq <= r_sq) {
      const double v = MaxQuadValue(pieces, x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    std::size_t k = 0;
    while (k < dim && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == dim) break;
  }
  Vec cur = best_x;
  for (int step = 0; step < 50; ++step) {
    const Vec g = MaxQuadSubgradient(pieces, cur);
    const double gn = std::sqrt(kernels::Norm2Sq(g));
    if (gn == 0.0) break;
    const double alpha = h / static_cast<double>(step + 1);
    for (std::size_t k = 0; k < dim; ++k) cur[k] -= alpha * g[k] / gn;
    const double n = std::sqrt(kernels::Norm2Sq(cur));
    if (n > radius) {
      for (double& v : cur) v *= radius / n;
    }
    const double v = MaxQuadValue(pieces, cur);
    if (v < best) {
      best = v;
      best_x = cur;
    }
  }
  return {best, best_x};
}

// Termwise nonnegative form of f(x) - f* for the entropic toy:
// sum_i u [(1+r) ln(1+r) - r] with u = 1/n, r = n x_i - 1.
double EntropyGapFromUniform(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double u = 1.0 / n;
  double s = 0.0;
  for (double xi : x) {
    const double r = n * xi - 1.0;
    if (r <= -1.0) {
      s += u;  // x_i = 0: the term tends to u.
    } else {
      s += u * ((1.0 + r) * std::log1p(r) - r);
    }
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

Matrix Matrix::FromRows(const std::vector<Vec>& rows) {
  Matrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows.front().size();
  m.data.reserve(m.rows * m.cols);
  for (const Vec& r : rows) {
    if (r.size() != m.cols) throw Error(ErrorCode::kDimensionMismatch, "ragged matrix");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

Vec Matrix::Apply(std::span<const double> x) const {
  CheckSize(x, cols);
  Vec y(rows);
  kernels::Active().gemv(data.data(), rows, cols, x.data(), y.data());
  return y;
}

Vec Matrix::ApplyTranspose(std::span<const double> x) const {
  CheckSize(x, rows);
  Vec y(cols);
  kernels::Active().gemv_t(data.data(), rows, cols, x.data(), y.data());
  return y;
}

std::string_view RegularityName(RegularityTag tag) {
  switch (tag) {
    case RegularityTag::kLipschitzSmooth: return "LipschitzSmooth";
    case RegularityTag::kLipschitzBounded: return "LipschitzBounded";
    case RegularityTag::kBregmanSmooth: return "BregmanSmooth";
    case RegularityTag::kBregmanBounded: return "BregmanBounded";
  }
  return "Unknown";
}

std::string_view GapKindName(GapKind kind) {
  switch (kind) {
    case GapKind::kConvex: return "convex";
    case GapKind::kSaddle: return "saddle";
    case GapKind::kResidual: return "residual";
  }
  return "unknown";
}

MonotoneProblem::MonotoneProblem(Spec spec) : spec_(std::move(spec)) {
  for (const auto& r : spec_.regularity) {
    if (!(r.constant > 0.0) || !std::isfinite(r.constant)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "regularity constant must be positive and finite");
    }
  }
  if (spec_.known_solution) CheckSize(*spec_.known_solution, dimension());
}

std::optional<double> MonotoneProblem::Constant(RegularityTag tag) const {
  for (const auto& r : spec_.regularity) {
    if (r.tag == tag) return r.constant;
  }
  return std::nullopt;
}

Vec MonotoneProblem::Evaluate(std::span<const double> x) const {
  CheckSize(x, dimension());
  Vec f = spec_.op(x);
  for (double v : f) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kBoundaryViolation, spec_.name + ": non-finite F(x)");
    }
  }
  return f;
}

double MonotoneProblem::Gap(std::span<const double> x) const {
  CheckSize(x, dimension());
  return spec_.gap(x);
}

// ---------------------------------------------------------------------------

double SaddleGap(const Matrix& a, std::span<const double> z,
                 std::span<const double> y) {
  CheckSize(z, a.rows);
  CheckSize(y, a.cols);
  const Vec atz = a.ApplyTranspose(z);
  const Vec ay = a.Apply(y);
  return *std::max_element(atz.begin(), atz.end()) -
         *std::min_element(ay.begin(), ay.end());
}

MonotoneProblem MakeMatrixGame(const Matrix& a, std::string name,
                               std::optional<Vec> equilibrium) {
  if (a.rows == 0 || a.cols == 0) throw Error(ErrorCode::kEmptyMatrix, "empty payoff");
  double amax = 0.0;
  for (double v : a.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite payoff");
    amax = std::max(amax, std::fabs(v));
  }
  if (!equilibrium && a.rows == 1 && a.cols == 1) equilibrium = Vec{1.0, 1.0};
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  MonotoneProblem::Spec spec{
      .name = std::move(name),
      .set = FeasibleSet::MakeProduct(
          {FeasibleSet::MakeSimplex(m), FeasibleSet::MakeSimplex(n)}),
      .op =
          [a, m, n](std::span<const double> x) {
            const Vec ay = a.Apply(x.subspan(m, n));
            const Vec atz = a.ApplyTranspose(x.subspan(0, m));
            Vec f(m + n);
            std::copy(ay.begin(), ay.end(), f.begin());
            for (std::size_t j = 0; j < n; ++j) f[m + j] = -atz[j];
            return f;
          },
      .gap =
          [a, m, n](std::span<const double> x) {
            return SaddleGap(a, x.subspan(0, m), x.subspan(m, n));
          },
      .gap_kind = GapKind::kSaddle,
      .native_geometry = GeometryKind::kNegativeEntropy,
      .regularity = {},
      .known_solution = std::move(equilibrium),
      .optimal_value = std::nullopt,
  };
  // (l1, l_inf) pairing per block, l2-combined across the two blocks.
  if (amax > 0.0) {
    spec.regularity = {{RegularityTag::kLipschitzSmooth, amax},
                       {RegularityTag::kLipschitzBounded, std::sqrt(2.0) * amax}};
  }
  return MonotoneProblem(std::move(spec));
}

MonotoneProblem MakeQuadratic(Vec target, double radius, std::string name) {
  const std::size_t dim = target.size();
  const double tn = std::sqrt(kernels::Norm2Sq(target));
  const double fstar = tn <= radius ? 0.0 : 0.5 * (tn - radius) * (tn - radius);
  Vec xstar = target;
  if (tn > radius) {
    for (double& v : xstar) v *= radius / tn;
  }
  MonotoneProblem::Spec spec{
      .name = std::move(name),
      .set = FeasibleSet::MakeBall(dim, radius),
      .op =
          [target](std::span<const double> x) {
            Vec f(x.begin(), x.end());
            for (std::size_t i = 0; i < f.size(); ++i) f[i] -= target[i];
            return f;
          },
      .gap =
          [target, fstar](std::span<const double> x) {
            return std::max(0.0, 0.5 * kernels::DiffNorm2Sq(x, target) - fstar);
          },
      .gap_kind = GapKind::kConvex,
      .native_geometry = GeometryKind::kEuclidean,
      .regularity = {{RegularityTag::kLipschitzSmooth, 1.0},
                     {RegularityTag::kLipschitzBounded, radius + tn}},
      .known_solution = std::move(xstar),
      .optimal_value = fstar,
  };
  return MonotoneProblem(std::move(spec));
}

MonotoneProblem MakeMaxQuadratics(std::vector<QuadraticPiece> pieces, double radius,
                                  std::string name,
                                  std::optional<double> optimal_value) {
  if (pieces.empty()) throw Error(ErrorCode::kInvalidArgument, "no pieces");
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "radius must be > 0");
  const std::size_t dim = pieces.front().b.size();
  double bound = 0.0;
  for (const auto& piece : pieces) {
    if (piece.q.rows != dim || piece.q.cols != dim || piece.b.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "piece dimensions");
    }
    Eigen::MatrixXd q(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) q(i, j) = piece.q(i, j);
    }
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + q.cwiseAbs().maxCoeff())) {
      throw Error(ErrorCode::kNotPsd, "Q is not symmetric");
    }
    const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                    q, Eigen::EigenvaluesOnly)
                                    .eigenvalues();
    if (eig.minCoeff() < -1e-10 * (1.0 + eig.cwiseAbs().maxCoeff())) {
      throw Error(ErrorCode::kNotPsd, "Q has a negative eigenvalue");
    }
    bound = std::max(bound, eig.maxCoeff() * radius +
                                std::sqrt(kernels::Norm2Sq(piece.b)));
  }

  std::optional<Vec> xstar;
  if (!optimal_value) {
    if (dim > 3) {
      throw Error(ErrorCode::kTooLarge, "f* oracle supports dim <= 3; supply f*");
    }
    auto [fstar, argmin] = MaxQuadOracle(pieces, radius, dim);
    optimal_value = fstar;
    xstar = std::move(argmin);
  }
  const double fstar = *optimal_value;
  MonotoneProblem::Spec spec{
      .name = std::move(name),
      .set = FeasibleSet::MakeBall(dim, radius),
      .op = [pieces](std::span<const double> x) { return MaxQuadSubgradient(pieces, x); },
      .gap =
          [pieces, fstar](std::span<const double> x) {
            return MaxQuadValue(pieces, x) - fstar;
          },
      .gap_kind = GapKind::kConvex,
      .native_geometry = GeometryKind::kCubeNorm,
      .regularity = {},
      .known_solution = std::move(xstar),
      .optimal_value = fstar,
  };
  if (bound > 0.0) spec.regularity.push_back({RegularityTag::kLipschitzBounded, bound});
  MonotoneProblem provisional(spec);
  const BregmanGeometry cube(GeometryKind::kCubeNorm, provisional.set());
  const double m = MaxSampledRatio(RegularityTag::kBregmanBounded, provisional, cube,
                                   kConstructionSamples, kCertifySeed);
  if (m > 0.0) spec.regularity.push_back({RegularityTag::kBregmanBounded, m});
  return MonotoneProblem(std::move(spec));
}

MonotoneProblem MakeEntropicToy(std::size_t n, std::string name) {
  if (n < 2) throw Error(ErrorCode::kDimensionTooSmall, "entropic toy needs n >= 2");
  MonotoneProblem::Spec spec{
      .name = std::move(name),
      .set = FeasibleSet::MakeSimplex(n),
      .op =
          [](std::span<const double> x) {
            Vec f(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
              if (!(x[i] > -1e-12)) {
                throw Error(ErrorCode::kBoundaryViolation, "ln x_i with x_i < 0");
              }
              f[i] = std::log(std::max(x[i], BregmanGeometry::kEntropyFloor)) + 1.0;
            }
            return f;
          },
      .gap = [](std::span<const double> x) { return EntropyGapFromUniform(x); },
      .gap_kind = GapKind::kConvex,
      .native_geometry = GeometryKind::kNegativeEntropy,
      .regularity = {},
      .known_solution = Vec(n, 1.0 / static_cast<double>(n)),
      .optimal_value = -std::log(static_cast<double>(n)),
  };
  MonotoneProblem provisional(spec);
  const BregmanGeometry entropy(GeometryKind::kNegativeEntropy, provisional.set());
  const double lbeta = MaxSampledRatio(RegularityTag::kBregmanSmooth, provisional,
                                       entropy, kConstructionSamples, kCertifySeed);
  spec.regularity.push_back({RegularityTag::kBregmanSmooth, lbeta});
  return MonotoneProblem(std::move(spec));
}

MonotoneProblem MakeNPlayerQuadratic(std::size_t players, double coupling,
                                     std::string name) {
  if (players < 2) throw Error(ErrorCode::kDimensionTooSmall, "need >= 2 players");
  if (!(std::fabs(coupling) < 1.0)) {
    throw Error(ErrorCode::kCouplingTooLarge, "|kappa| must be < 1");
  }
  const double others = static_cast<double>(players - 1);
  // Symmetric Jacobian I + kappa/(N-1) (J - I): eigenvalues 1 + kappa and
  // 1 - kappa/(N-1).
  const double lip = std::max(std::fabs(1.0 + coupling), std::fabs(1.0 - coupling / others));
  auto op = [coupling, others](std::span<const double> x) {
    double total = 0.0;
    for (double v : x) total += v;
    Vec f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      f[i] = x[i] + coupling * (total - x[i]) / others;
    }
    return f;
  };
  MonotoneProblem::Spec spec{
      .name = std::move(name),
      .set = FeasibleSet::MakeBox(Vec(players, -1.0), Vec(players, 1.0)),
      .op = op,
      .gap = [op](std::span<const double> x) { return kernels::Dot(op(x), x); },
      .gap_kind = GapKind::kResidual,
      .native_geometry = GeometryKind::kEuclidean,
      .regularity = {{RegularityTag::kLipschitzSmooth, lip},
                     {RegularityTag::kLipschitzBounded,
                      lip * std::sqrt(static_cast<double>(players))}},
      .known_solution = Vec(players, 0.0),
      .optimal_value = std::nullopt,
  };
  return MonotoneProblem(std::move(spec));
}

std::vector<std::string> CatalogNames() {
  return {"matgame-rps", "matgame-2x2", "quadratic", "maxquad", "entropic", "nplayer"};
}

MonotoneProblem MakeCatalogProblem(std::string_view name) {
  if (name == "matgame-rps") {
    const Matrix a = Matrix::FromRows({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
    return MakeMatrixGame(a, "matgame-rps", Vec(6, 1.0 / 3.0));
  }
  if (name == "matgame-2x2") {
    const Matrix a = Matrix::FromRows({{1, -1}, {-1, 1}});
    return MakeMatrixGame(a, "matgame-2x2", Vec(4, 0.5));
  }
  if (name == "quadratic") return MakeQuadratic({1.0, -0.5}, 2.0, "quadratic");
  if (name == "maxquad") {
    // max{ 1/2 x1^2 + x2, 1/2 x2^2 - x2 }: two singular convex quadratics,
    // nonsmooth at the minimizer 0.
    std::vector<QuadraticPiece> pieces{
        {Matrix::FromRows({{1, 0}, {0, 0}}), {0.0, 1.0}},
        {Matrix::FromRows({{0, 0}, {0, 1}}), {0.0, -1.0}},
    };
    return MakeMaxQuadratics(std::move(pieces), 2.0, "maxquad");
  }
  if (name == "entropic") return MakeEntropicToy(10, "entropic");
  if (name == "nplayer") return MakeNPlayerQuadratic(4, 0.5, "nplayer");
  throw Error(ErrorCode::kUnknownProblem, std::string(name));
}

// ---------------------------------------------------------------------------

bool CertificationReport::AllPassed() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const RegularityCertificate& c) { return c.passed; });
}

CertificationReport CertifyRegularity(const MonotoneProblem& p,
                                      const BregmanGeometry& g, std::size_t samples,
                                      std::optional<RegularityTag> tag,
                                      std::optional<double> declared,
                                      std::uint64_t seed) {
  if (samples < 100) throw Error(ErrorCode::kInvalidArgument, "need >= 100 samples");
  if (g.dimension() != p.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "geometry and problem dimensions");
  }
  std::vector<std::pair<RegularityTag, double>> targets;
  if (tag) {
    const auto c = declared ? declared : p.Constant(*tag);
    // A missing constant certifies against 0: only the zero operator passes.
    targets.emplace_back(*tag, c.value_or(0.0));
  } else {
    for (const auto& r : p.regularity()) targets.emplace_back(r.tag, r.constant);
  }
  CertificationReport report;
  for (const auto& [t, c] : targets) {
    const double emp = MaxSampledRatio(t, p, g, samples, seed);
    RegularityCertificate cert{t, c, emp, emp <= 1.01 * c, ""};
    if (t == RegularityTag::kBregmanSmooth) {
      cert.note = "global dual norm used in place of the local dual norm";
    }
    report.entries.push_back(std::move(cert));
  }
  return report;
}

double MinMonotonicityResidual(const MonotoneProblem& p, const BregmanGeometry& g,
                               std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const auto [x, y] = SamplePair(g, rng, kCertifyFloor);
    const Vec df = Difference(p.Evaluate(x), p.Evaluate(y));
    const Vec dx = Difference(x, y);
    worst = std::min(worst, kernels::Dot(dx, df));
  }
  return worst;
}

}  // namespace mpx
