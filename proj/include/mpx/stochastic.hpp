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

#ifndef MPX_STOCHASTIC_HPP_
#define MPX_STOCHASTIC_HPP_

// Bounded, zero-mean noise oracles and the martingale inner-product check.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "mpx/geometry.hpp"
#include "mpx/problems.hpp"

namespace mpx {

enum class NoiseKind { kNone, kSphereUniform, kComponentBounded };

std::string_view NoiseName(NoiseKind kind);
std::optional<NoiseKind> ParseNoise(std::string_view name);

// Noise lives in the dual space. SphereUniform draws uniformly on the
// Euclidean sphere of radius sigma; ComponentBounded draws each coordinate
// uniformly in [-sigma/sqrt(d), sigma/sqrt(d)]. Both have Euclidean norm at
// most sigma, hence dual norm at most sigma for every supported geometry.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double sigma = 0.0;

  static NoiseModel None() { return {}; }
  static NoiseModel Sphere(double sigma);
  static NoiseModel Component(double sigma);
  bool active() const { return kind != NoiseKind::kNone && sigma > 0.0; }
};

// 64-bit FNV-1a.
std::uint64_t HashName(std::string_view name);

class NoisyOracle {
 public:
  NoisyOracle(const MonotoneProblem& base, NoiseModel noise, std::uint64_t seed);

  // F(x) + xi with a fresh draw of xi on every call.
  Vec Sample(std::span<const double> x);
  // A fresh draw of xi alone.
  Vec Noise(std::size_t dim);

  const NoiseModel& noise() const { return noise_; }

 private:
  const MonotoneProblem* base_;
  NoiseModel noise_;
  std::mt19937_64 rng_;
};

enum class MartingaleScenario {
  kAdaptive,     // Rademacher signs times directions that depend on the past
  kZero,         // Z_i = 0
  kSignedAxis,   // Z_i uniform on {+e1, -e1}
  kIidFixedX,    // i.i.d. sphere-uniform Z_i, X fixed in advance
};

struct MartingaleCheck {
  double estimate = 0.0;        // Monte-Carlo mean of <sum Z_i, X>
  double standard_error = 0.0;
  double bound = 0.0;           // (D/2) sqrt(sum E|Z_i|^2)
  bool passed = false;          // estimate <= bound + 3 standard errors
};

// X ranges over the Euclidean ball of radius D/2 and, except for kIidFixedX,
// is chosen adversarially after the sequence: X = (D/2) S / |S|.
MartingaleCheck MartingaleLemmaCheck(double diameter, std::size_t trials, std::size_t n,
                                     std::uint64_t seed,
                                     MartingaleScenario scenario = MartingaleScenario::kAdaptive,
                                     std::size_t dim = 3);

}  // namespace mpx

#endif  // MPX_STOCHASTIC_HPP_
