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

#ifndef MPX_SOLVER_HPP_
#define MPX_SOLVER_HPP_

// Mirror-prox with pluggable step-size policies.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpx/geometry.hpp"
#include "mpx/problems.hpp"
#include "mpx/stochastic.hpp"

namespace mpx {

enum class PolicyKind {
  kFixed,
  kUniversalNorm,
  kBregmanSmooth,
  kBregmanBounded,
  kStochastic,
  kAdaptiveLbeta,
};

// CLI names: fixed, unorm, bsmooth, bbounded, stoch, adaptlb.
std::string_view PolicyName(PolicyKind kind);
std::optional<PolicyKind> ParsePolicy(std::string_view name);
bool IsUniversal(PolicyKind kind);

class StepSizePolicy {
 public:
  static StepSizePolicy Fixed(double eta);
  // c defaults: BregmanSmooth sqrt(2), BregmanBounded 1, UniversalNorm
  // sqrt(5), Stochastic 5 on smooth problems and 1 otherwise.
  static StepSizePolicy Universal(PolicyKind kind, double diameter, double g0,
                                  double c);
  static StepSizePolicy AdaptiveLbeta(double diameter, double g0, double theta = 0.9,
                                      double k = 1.0);

  static double DefaultC(PolicyKind kind, bool smooth_problem);

  PolicyKind kind() const { return kind_; }
  double diameter() const { return diameter_; }
  double g0() const { return g0_; }
  double c() const { return c_; }
  double theta() const { return theta_; }
  double accumulator() const { return accumulator_; }

  double StepSize() const;

  // Z_t for the iteration that used step `eta`; adds Z_t^2 to the
  // accumulator of universal kinds. Fixed and AdaptiveLbeta report the
  // bounded-form statistic with c = 1 without accumulating.
  double ZStatistic(const BregmanGeometry& g, std::span<const double> y_prev,
                    std::span<const double> x_t, std::span<const double> y_t,
                    double eta);

  // AdaptiveLbeta update from m_t = F(y_{t-1}) and g_t = F(x_t).
  void ObserveOperator(const BregmanGeometry& g, std::span<const double> y_prev,
                       std::span<const double> x_t, std::span<const double> m_t,
                       std::span<const double> g_t);

 private:
  StepSizePolicy() = default;

  PolicyKind kind_ = PolicyKind::kFixed;
  double diameter_ = 0.0;
  double g0_ = 1.0;
  double c_ = 1.0;
  double theta_ = 0.9;
  double k_ = 1.0;
  double accumulator_ = 0.0;
  double eta_ = 0.0;  // Fixed and AdaptiveLbeta
};

using OracleFn = std::function<Vec(std::span<const double>)>;

struct SolverState {
  Vec y_prev;
  Vec x_curr;
  std::size_t t = 0;
  Vec ergodic_sum;
  // Values of the latest iteration.
  double eta = 0.0;
  double z = 0.0;
  Vec m_curr;
  Vec g_curr;

  static SolverState Start(Vec y0);
  Vec Average() const;
};

// One iteration: eta_t, m_t = F(y_{t-1}), x_t, g_t = F(x_t), y_t, Z_t.
void MpIterate(SolverState& state, const OracleFn& oracle, const BregmanGeometry& g,
               StepSizePolicy& policy);

struct TraceRow {
  std::size_t t = 0;
  double eta = 0.0;
  double z = 0.0;
  double gap = 0.0;
  std::optional<double> cum_regret;
  double operator_norm = 0.0;  // max(|m_t|_*, |g_t|_*); not serialized
};

struct RunMeta {
  std::string problem;
  std::string geometry;
  std::string policy;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double diameter = 0.0;
  double g0 = 1.0;
  double c = 1.0;
  double sigma = 0.0;
  std::string noise = "none";
  std::string start = "center";
  bool eta1_above_one = false;
};

struct RunReport {
  RunMeta meta;
  std::vector<TraceRow> rows;
  Vec average;  // x_bar_T
  // Tracked over every iteration, including those without a row.
  double max_z = 0.0;
  double max_operator_norm = 0.0;
  double first_eta = 0.0;
  bool eta_nonincreasing = true;
};

struct RunOptions {
  NoiseModel noise;
  std::optional<Vec> start;  // defaults to argmin R
  std::string start_label = "center";
};

// Rows are recorded at every iteration for T <= 10^4 and every ceil(T/10^4)
// iterations beyond, always including t = T.
std::size_t RowStride(std::size_t iterations);

RunReport Run(const MonotoneProblem& p, const BregmanGeometry& g, StepSizePolicy policy,
              std::size_t iterations, std::uint64_t seed, const RunOptions& options = {});

struct ZBound {
  double max_z = 0.0;
  double bound = 0.0;  // inflated by 5%
  double g_prime = 0.0;
  std::string rule;
  bool passed = false;
};

ZBound ZBoundDetails(const RunReport& report, const MonotoneProblem& p);
bool ZBoundCheck(const RunReport& report, const MonotoneProblem& p);

}  // namespace mpx

#endif  // MPX_SOLVER_HPP_
