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

#include "mpx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mpx/error.hpp"
#include "mpx/kernels.hpp"

namespace mpx {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void RequireFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " has a non-finite entry");
    }
  }
}

// Clamps a simplex block to the entropy floor and renormalizes it.
Vec ClampSimplex(std::span<const double> x) {
  Vec out(x.begin(), x.end());
  for (double& v : out) {
    if (v < -1e-9) {
      throw Error(ErrorCode::kBoundaryViolation,
                  "negative coordinate on a simplex block");
    }
    v = std::max(v, BregmanGeometry::kEntropyFloor);
  }
  const double s = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= s;
  return out;
}

double EntropyDivergence(std::span<const double> y, std::span<const double> x) {
  const Vec yc = ClampSimplex(y);
  const Vec xc = ClampSimplex(x);
  double s = 0.0;
  for (std::size_t i = 0; i < yc.size(); ++i) s += yc[i] * std::log(yc[i] / xc[i]);
  // KL between normalized vectors; Gibbs' inequality makes negatives pure
  // rounding.
  return std::max(s, 0.0);
}

// Bregman divergence of 1/3 |u|^3 around a common center, written as a sum of
// nonnegative terms:  1/3 (a-b)^2 (a+2b) + b (ab - <u,v>).
double CubeDivergence(std::span<const double> y, std::span<const double> x,
                      std::span<const double> center) {
  const std::size_t n = y.size();
  Vec u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = y[i] - center[i];
    v[i] = x[i] - center[i];
  }
  const double a = std::sqrt(kernels::Norm2Sq(u));
  const double b = std::sqrt(kernels::Norm2Sq(v));
  const double dist_sq = kernels::DiffNorm2Sq(u, v);
  const double ab_minus_dot = std::max(0.0, 0.5 * (dist_sq - (a - b) * (a - b)));
  const double cube = (a - b) * (a - b) * (a + 2.0 * b) / 3.0 + b * ab_minus_dot;
  return cube + 0.5 * dist_sq;
}

// Euclidean projection onto the probability simplex (sort-based).
void ProjectSimplex(std::span<double> v) {
  Vec sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) tau = t;
  }
  for (double& x : v) x = std::max(x - tau, 0.0);
}

void ProjectBall(std::span<double> v, const Ball& ball) {
  Vec diff(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) diff[i] = v[i] - ball.center[i];
  const double norm = std::sqrt(kernels::Norm2Sq(diff));
  if (norm <= ball.radius) return;
  const double scale = ball.radius / norm;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = ball.center[i] + scale * diff[i];
}

void ProjectBox(std::span<double> v, const Box& box) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::clamp(v[i], box.lower[i], box.upper[i]);
  }
}

double BlockDiameterSq(GeometryKind kind, const FeasibleSet& leaf) {
  return std::visit(
      Overloaded{
          [&](const Simplex& s) -> double {
            if (kind == GeometryKind::kNegativeEntropy) {
              return std::log(static_cast<double>(s.n));
            }
            // sup over the simplex of 1/2 |y - x|^2.
            return s.n > 1 ? 1.0 : 0.0;
          },
          [&](const Ball& b) -> double {
            const double r = b.radius;
            if (kind == GeometryKind::kCubeNorm) {
              // Bounds the variation 1/3 r^3 + 1/2 r^2 of R over the ball.
              return 5.0 / 3.0 * r * r * r + 2.0 * r * r;
            }
            return 2.0 * r * r;
          },
          [&](const Box& b) -> double {
            double s = 0.0;
            for (std::size_t i = 0; i < b.lower.size(); ++i) {
              const double w = b.upper[i] - b.lower[i];
              if (!std::isfinite(w)) {
                throw Error(ErrorCode::kUnboundedSet, "box with infinite side");
              }
              s += w * w;
            }
            return 0.5 * s;
          },
          [&](const Product&) -> double { return 0.0; },
      },
      leaf.kind());
}

}  // namespace

// ---------------------------------------------------------------------------
// FeasibleSet

FeasibleSet::FeasibleSet(Kind kind) : kind_(std::move(kind)) {
  dimension_ = std::visit(
      Overloaded{
          [](const Simplex& s) { return s.n; },
          [](const Ball& b) { return b.center.size(); },
          [](const Box& b) { return b.lower.size(); },
          [](const Product& p) {
            std::size_t d = 0;
            for (const auto& m : p.members) d += m.dimension();
            return d;
          },
      },
      kind_);
}

FeasibleSet FeasibleSet::MakeSimplex(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty simplex");
  return FeasibleSet(Simplex{n});
}

FeasibleSet FeasibleSet::MakeBall(Vec center, double radius) {
  if (center.empty() || !(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidArgument, "ball needs dim >= 1 and radius > 0");
  }
  RequireFinite(center, "ball center");
  return FeasibleSet(Ball{std::move(center), radius});
}

FeasibleSet FeasibleSet::MakeBall(std::size_t dim, double radius) {
  return MakeBall(Vec(dim, 0.0), radius);
}

FeasibleSet FeasibleSet::MakeBox(Vec lower, Vec upper) {
  if (lower.empty() || lower.size() != upper.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "box bounds");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw Error(ErrorCode::kInvalidArgument, "box lower > upper");
    }
  }
  return FeasibleSet(Box{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::MakeProduct(std::vector<FeasibleSet> members) {
  if (members.empty()) throw Error(ErrorCode::kInvalidArgument, "empty product");
  return FeasibleSet(Product{std::move(members)});
}

bool FeasibleSet::Contains(std::span<const double> x, double tol) const {
  if (x.size() != dimension_) return false;
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return std::visit(
      Overloaded{
          [&](const Simplex&) {
            double s = 0.0;
            for (double v : x) {
              if (v < -tol) return false;
              s += v;
            }
            return std::fabs(s - 1.0) <= tol;
          },
          [&](const Ball& b) {
            return std::sqrt(kernels::DiffNorm2Sq(x, b.center)) <= b.radius + tol;
          },
          [&](const Box& b) {
            for (std::size_t i = 0; i < x.size(); ++i) {
              if (x[i] < b.lower[i] - tol || x[i] > b.upper[i] + tol) return false;
            }
            return true;
          },
          [&](const Product& p) {
            std::size_t off = 0;
            for (const auto& m : p.members) {
              if (!m.Contains(x.subspan(off, m.dimension()), tol)) return false;
              off += m.dimension();
            }
            return true;
          },
      },
      kind_);
}

std::string_view GeometryName(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::kEuclidean: return "euclidean";
    case GeometryKind::kNegativeEntropy: return "entropy";
    case GeometryKind::kCubeNorm: return "cube";
  }
  return "unknown";
}

std::optional<GeometryKind> ParseGeometry(std::string_view name) {
  if (name == "euclidean") return GeometryKind::kEuclidean;
  if (name == "entropy") return GeometryKind::kNegativeEntropy;
  if (name == "cube") return GeometryKind::kCubeNorm;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// BregmanGeometry

BregmanGeometry::BregmanGeometry(GeometryKind kind, FeasibleSet set,
                                 std::optional<double> diameter_override)
    : kind_(kind), set_(std::move(set)) {
  std::size_t offset = 0;
  Flatten(set_, offset);
  double d2 = 0.0;
  for (const Block& b : blocks_) d2 += BlockDiameterSq(b.kind, b.leaf);
  diameter_ = std::sqrt(d2);
  if (diameter_override) {
    if (!(*diameter_override >= diameter_)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "diameter override must not be below the analytic value");
    }
    diameter_ = *diameter_override;
  }
}

void BregmanGeometry::Flatten(const FeasibleSet& set, std::size_t& offset) {
  if (const auto* p = std::get_if<Product>(&set.kind())) {
    for (const auto& m : p->members) Flatten(m, offset);
    return;
  }
  const bool simplex = std::holds_alternative<Simplex>(set.kind());
  const bool ball = std::holds_alternative<Ball>(set.kind());
  if (kind_ == GeometryKind::kNegativeEntropy && !simplex) {
    throw Error(ErrorCode::kIncompatibleGeometry,
                "negative entropy needs simplex blocks");
  }
  if (kind_ == GeometryKind::kCubeNorm && !ball) {
    throw Error(ErrorCode::kIncompatibleGeometry, "cube norm needs ball blocks");
  }
  blocks_.push_back(Block{kind_, offset, set.dimension(), set});
  offset += set.dimension();
}

void BregmanGeometry::CheckDim(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(dimension()) + " coordinates, got " +
                    std::to_string(x.size()));
  }
}

double BregmanGeometry::Divergence(std::span<const double> y,
                                   std::span<const double> x) const {
  CheckDim(y);
  CheckDim(x);
  double total = 0.0;
  for (const Block& b : blocks_) {
    const auto yb = y.subspan(b.offset, b.dim);
    const auto xb = x.subspan(b.offset, b.dim);
    switch (b.kind) {
      case GeometryKind::kEuclidean:
        total += 0.5 * kernels::DiffNorm2Sq(yb, xb);
        break;
      case GeometryKind::kNegativeEntropy:
        total += EntropyDivergence(yb, xb);
        break;
      case GeometryKind::kCubeNorm:
        total += CubeDivergence(yb, xb, std::get<Ball>(b.leaf.kind()).center);
        break;
    }
  }
  return total;
}

Vec BregmanGeometry::ProxStep(std::span<const double> x,
                              std::span<const double> d, double eta) const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::kNonPositiveStep, "prox step needs eta > 0");
  }
  CheckDim(x);
  CheckDim(d);
  RequireFinite(d, "prox direction");
  Vec z(x.size());
  for (const Block& b : blocks_) {
    const auto xb = x.subspan(b.offset, b.dim);
    const auto db = d.subspan(b.offset, b.dim);
    std::span<double> zb(z.data() + b.offset, b.dim);
    switch (b.kind) {
      case GeometryKind::kEuclidean: {
        for (std::size_t i = 0; i < b.dim; ++i) zb[i] = xb[i] - eta * db[i];
        std::visit(Overloaded{
                       [&](const Simplex&) { ProjectSimplex(zb); },
                       [&](const Ball& ball) { ProjectBall(zb, ball); },
                       [&](const Box& box) { ProjectBox(zb, box); },
                       [&](const Product&) {},
                   },
                   b.leaf.kind());
        break;
      }
      case GeometryKind::kNegativeEntropy: {
        const Vec xc = ClampSimplex(xb);
        double wmax = -INFINITY;
        for (std::size_t i = 0; i < b.dim; ++i) {
          zb[i] = std::log(xc[i]) - eta * db[i];
          wmax = std::max(wmax, zb[i]);
        }
        double s = 0.0;
        for (std::size_t i = 0; i < b.dim; ++i) {
          zb[i] = std::exp(zb[i] - wmax);
          s += zb[i];
        }
        for (std::size_t i = 0; i < b.dim; ++i) zb[i] /= s;
        break;
      }
      case GeometryKind::kCubeNorm: {
        // Radial R: grad R(u) = (|u| + 1) u. The minimizer points along
        // v = grad R(x) - eta d with radius solving s^2 + s = |v|, clipped to
        // the ball.
        const Ball& ball = std::get<Ball>(b.leaf.kind());
        Vec v(b.dim);
        double xn_sq = 0.0;
        for (std::size_t i = 0; i < b.dim; ++i) {
          const double u = xb[i] - ball.center[i];
          xn_sq += u * u;
        }
        const double scale = std::sqrt(xn_sq) + 1.0;
        for (std::size_t i = 0; i < b.dim; ++i) {
          v[i] = scale * (xb[i] - ball.center[i]) - eta * db[i];
        }
        const double vn = std::sqrt(kernels::Norm2Sq(v));
        if (vn == 0.0) {
          for (std::size_t i = 0; i < b.dim; ++i) zb[i] = ball.center[i];
          break;
        }
        const double s = std::min(SolveCubeRadius(vn), ball.radius);
        for (std::size_t i = 0; i < b.dim; ++i) {
          zb[i] = ball.center[i] + s * v[i] / vn;
        }
        break;
      }
    }
  }
  return z;
}

double BregmanGeometry::Norm(std::span<const double> v) const {
  CheckDim(v);
  double sq = 0.0;
  for (const Block& b : blocks_) {
    const auto vb = v.subspan(b.offset, b.dim);
    if (b.kind == GeometryKind::kNegativeEntropy) {
      const double n1 = kernels::SumAbs(vb);
      sq += n1 * n1;
    } else {
      sq += kernels::Norm2Sq(vb);
    }
  }
  return std::sqrt(sq);
}

double BregmanGeometry::DualNorm(std::span<const double> v) const {
  CheckDim(v);
  double sq = 0.0;
  for (const Block& b : blocks_) {
    const auto vb = v.subspan(b.offset, b.dim);
    if (b.kind == GeometryKind::kNegativeEntropy) {
      const double ninf = kernels::MaxAbs(vb);
      sq += ninf * ninf;
    } else {
      sq += kernels::Norm2Sq(vb);
    }
  }
  return std::sqrt(sq);
}

double BregmanGeometry::StrongConvexityResidual(std::span<const double> y,
                                                std::span<const double> x) const {
  Vec diff(y.size());
  CheckDim(y);
  CheckDim(x);
  for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - x[i];
  const double n = Norm(diff);
  return Divergence(y, x) - 0.5 * n * n;
}

Vec BregmanGeometry::Center() const {
  Vec c(dimension());
  for (const Block& b : blocks_) {
    std::span<double> cb(c.data() + b.offset, b.dim);
    std::visit(Overloaded{
                   [&](const Simplex& s) {
                     std::fill(cb.begin(), cb.end(), 1.0 / static_cast<double>(s.n));
                   },
                   [&](const Ball& ball) {
                     std::copy(ball.center.begin(), ball.center.end(), cb.begin());
                   },
                   [&](const Box& box) {
                     for (std::size_t i = 0; i < b.dim; ++i) {
                       cb[i] = std::clamp(0.0, box.lower[i], box.upper[i]);
                     }
                   },
                   [&](const Product&) {},
               },
               b.leaf.kind());
  }
  return c;
}

Vec BregmanGeometry::SkewedPoint() const {
  Vec p(dimension());
  for (const Block& blk : blocks_) {
    std::span<double> pb(p.data() + blk.offset, blk.dim);
    std::visit(Overloaded{
                   [&](const Simplex& s) {
                     const double n = static_cast<double>(s.n);
                     const double total = n * (n + 1.0) / 2.0;
                     for (std::size_t i = 0; i < s.n; ++i) {
                       pb[i] = static_cast<double>(i + 1) / total;
                     }
                   },
                   [&](const Ball& ball) {
                     std::copy(ball.center.begin(), ball.center.end(), pb.begin());
                     const double step = 0.5 * ball.radius /
                                         std::sqrt(static_cast<double>(blk.dim));
                     for (std::size_t i = 0; i < blk.dim; ++i) {
                       pb[i] += (i % 2 == 0) ? -step : step;
                     }
                   },
                   [&](const Box& box) {
                     for (std::size_t i = 0; i < blk.dim; ++i) {
                       const double w = box.upper[i] - box.lower[i];
                       pb[i] = box.lower[i] + ((i % 2 == 0) ? 0.25 : 0.75) * w;
                     }
                   },
                   [&](const Product&) {},
               },
               blk.leaf.kind());
  }
  return p;
}

Vec BregmanGeometry::Sample(std::mt19937_64& rng, double floor) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec p(dimension());
  for (const Block& blk : blocks_) {
    std::span<double> pb(p.data() + blk.offset, blk.dim);
    std::visit(
        Overloaded{
            [&](const Simplex& s) {
              // Dirichlet(1) via normalized exponentials.
              double total = 0.0;
              for (std::size_t i = 0; i < s.n; ++i) {
                pb[i] = -std::log(1.0 - unif(rng));
                total += pb[i];
              }
              for (double& v : pb) v /= total;
              if (floor > 0.0 && s.n > 1 && unif(rng) < 0.5) {
                // Push one coordinate down to 10^U(log10 floor, -1).
                const std::size_t k = static_cast<std::size_t>(unif(rng) * s.n) % s.n;
                const double lo = std::log10(floor);
                const double small = std::pow(10.0, lo + (-1.0 - lo) * unif(rng));
                const double rest = 1.0 - pb[k];
                for (std::size_t i = 0; i < s.n; ++i) {
                  if (i != k) pb[i] = rest > 0.0 ? pb[i] / rest * (1.0 - small) : (1.0 - small) / (s.n - 1);
                }
                pb[k] = small;
              }
              if (floor > 0.0) {
                for (double& v : pb) v = std::max(v, floor);
                double t = 0.0;
                for (double v : pb) t += v;
                for (double& v : pb) v /= t;
              }
            },
            [&](const Ball& ball) {
              double norm = 0.0;
              Vec dir(blk.dim);
              for (double& v : dir) {
                v = normal(rng);
                norm += v * v;
              }
              norm = std::sqrt(norm);
              const double r =
                  ball.radius * std::pow(unif(rng), 1.0 / static_cast<double>(blk.dim));
              for (std::size_t i = 0; i < blk.dim; ++i) {
                pb[i] = ball.center[i] + (norm > 0.0 ? r * dir[i] / norm : 0.0);
              }
            },
            [&](const Box& box) {
              for (std::size_t i = 0; i < blk.dim; ++i) {
                pb[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unif(rng);
              }
            },
            [&](const Product&) {},
        },
        blk.leaf.kind());
  }
  return p;
}

double SolveCubeRadius(double target) {
  if (!(target >= 0.0) || !std::isfinite(target)) {
    throw Error(ErrorCode::kRootFindFailure, "cube radius target must be finite");
  }
  if (target == 0.0) return 0.0;
  double lo = 0.0;
  double hi = target;  // s^2 + s >= s, so the root is <= target.
  double s = std::min(target, std::sqrt(target));
  for (int iter = 0; iter < 200; ++iter) {
    const double f = s * s + s - target;
    if (f > 0.0) {
      hi = s;
    } else {
      lo = s;
    }
    if (f == 0.0) return s;
    double next = s - f / (2.0 * s + 1.0);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    constexpr double kTol = 4.0 * std::numeric_limits<double>::epsilon();
    if (std::fabs(next - s) <= kTol * next || hi - lo <= kTol * hi) return next;
    s = next;
  }
  throw Error(ErrorCode::kRootFindFailure, "cube radius solve did not converge");
}

}  // namespace mpx
