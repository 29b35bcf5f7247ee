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

#include "mpx/stochastic.hpp"

#include <cmath>

#include "mpx/error.hpp"
#include "mpx/kernels.hpp"

namespace mpx {
namespace {

Vec UnitSphere(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  double n2 = 0.0;
  while (n2 == 0.0) {
    for (double& x : v) x = normal(rng);
    n2 = kernels::Norm2Sq(v);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace

std::string_view NoiseName(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone: return "none";
    case NoiseKind::kSphereUniform: return "sphere";
    case NoiseKind::kComponentBounded: return "component";
  }
  return "unknown";
}

std::optional<NoiseKind> ParseNoise(std::string_view name) {
  if (name == "none") return NoiseKind::kNone;
  if (name == "sphere") return NoiseKind::kSphereUniform;
  if (name == "component") return NoiseKind::kComponentBounded;
  return std::nullopt;
}

NoiseModel NoiseModel::Sphere(double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  return {NoiseKind::kSphereUniform, sigma};
}

NoiseModel NoiseModel::Component(double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  return {NoiseKind::kComponentBounded, sigma};
}

std::uint64_t HashName(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

NoisyOracle::NoisyOracle(const MonotoneProblem& base, NoiseModel noise,
                         std::uint64_t seed)
    : base_(&base), noise_(noise), rng_(seed ^ HashName(base.name())) {}

Vec NoisyOracle::Noise(std::size_t dim) {
  Vec xi(dim, 0.0);
  if (!noise_.active()) return xi;
  if (noise_.kind == NoiseKind::kSphereUniform) {
    xi = UnitSphere(rng_, dim);
    for (double& v : xi) v *= noise_.sigma;
  } else {
    const double half = noise_.sigma / std::sqrt(static_cast<double>(dim));
    std::uniform_real_distribution<double> unif(-half, half);
    for (double& v : xi) v = unif(rng_);
  }
  return xi;
}

Vec NoisyOracle::Sample(std::span<const double> x) {
  Vec f = base_->Evaluate(x);
  if (!noise_.active()) return f;
  const Vec xi = Noise(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += xi[i];
  return f;
}

MartingaleCheck MartingaleLemmaCheck(double diameter, std::size_t trials, std::size_t n,
                                     std::uint64_t seed, MartingaleScenario scenario,
                                     std::size_t dim) {
  if (!(diameter > 0.0)) throw Error(ErrorCode::kInvalidArgument, "D must be > 0");
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "dim must be >= 1");
  if (trials < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 trials");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double radius = 0.5 * diameter;
  const Vec fixed_x = [&] {
    Vec v = UnitSphere(rng, dim);
    for (double& c : v) c *= radius;
    return v;
  }();

  double sum = 0.0;
  double sum_sq = 0.0;
  double energy = 0.0;  // sum over trials of sum_i |Z_i|^2
  Vec s(dim);
  Vec z(dim);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      switch (scenario) {
        case MartingaleScenario::kZero:
          std::fill(z.begin(), z.end(), 0.0);
          break;
        case MartingaleScenario::kSignedAxis:
          std::fill(z.begin(), z.end(), 0.0);
          z[0] = coin(rng) ? 1.0 : -1.0;
          break;
        case MartingaleScenario::kIidFixedX:
          z = UnitSphere(rng, dim);
          break;
        case MartingaleScenario::kAdaptive: {
          // Direction and scale are predictable (functions of the past and
          // of independent draws); the Rademacher sign makes E[Z_i | past] = 0.
          Vec dir = UnitSphere(rng, dim);
          const double sn = std::sqrt(kernels::Norm2Sq(s));
          if (sn > 0.0) {
            for (std::size_t k = 0; k < dim; ++k) dir[k] += 2.0 * s[k] / sn;
            const double dn = std::sqrt(kernels::Norm2Sq(dir));
            for (double& v : dir) v /= dn;
          }
          const double scale = 0.5 + 0.5 * unif(rng);
          const double sign = coin(rng) ? 1.0 : -1.0;
          for (std::size_t k = 0; k < dim; ++k) z[k] = sign * scale * dir[k];
          break;
        }
      }
      energy += kernels::Norm2Sq(z);
      for (std::size_t k = 0; k < dim; ++k) s[k] += z[k];
    }
    double value = 0.0;
    if (scenario == MartingaleScenario::kIidFixedX) {
      value = kernels::Dot(s, fixed_x);
    } else {
      value = radius * std::sqrt(kernels::Norm2Sq(s));
    }
    sum += value;
    sum_sq += value * value;
  }
  MartingaleCheck out;
  const double t = static_cast<double>(trials);
  if (trials == 0) return out;
  out.estimate = sum / t;
  const double var = trials > 1 ? std::max(0.0, (sum_sq - t * out.estimate * out.estimate) / (t - 1.0)) : 0.0;
  out.standard_error = std::sqrt(var / t);
  out.bound = radius * std::sqrt(energy / t);
  out.passed = out.estimate <= out.bound + 3.0 * out.standard_error;
  return out;
}

}  // namespace mpx
