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

#include "mpx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mpx/error.hpp"
#include "mpx/kernels.hpp"

namespace mpx {
namespace {

void CheckEta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::kNonPositiveStep, "step size must be positive and finite");
  }
}

void CheckDiameterAndG0(double diameter, double g0) {
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw Error(ErrorCode::kInvalidArgument, "D must be positive and finite");
  }
  if (g0 == 0.0 || !std::isfinite(g0)) {
    throw Error(ErrorCode::kInvalidArgument, "G0 must be nonzero and finite");
  }
}

Vec Sub(std::span<const double> a, std::span<const double> b) {
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

std::string_view PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFixed: return "fixed";
    case PolicyKind::kUniversalNorm: return "unorm";
    case PolicyKind::kBregmanSmooth: return "bsmooth";
    case PolicyKind::kBregmanBounded: return "bbounded";
    case PolicyKind::kStochastic: return "stoch";
    case PolicyKind::kAdaptiveLbeta: return "adaptlb";
  }
  return "unknown";
}

std::optional<PolicyKind> ParsePolicy(std::string_view name) {
  for (PolicyKind k : {PolicyKind::kFixed, PolicyKind::kUniversalNorm,
                       PolicyKind::kBregmanSmooth, PolicyKind::kBregmanBounded,
                       PolicyKind::kStochastic, PolicyKind::kAdaptiveLbeta}) {
    if (PolicyName(k) == name) return k;
  }
  return std::nullopt;
}

bool IsUniversal(PolicyKind kind) {
  return kind != PolicyKind::kFixed && kind != PolicyKind::kAdaptiveLbeta;
}

StepSizePolicy StepSizePolicy::Fixed(double eta) {
  CheckEta(eta);
  StepSizePolicy p;
  p.kind_ = PolicyKind::kFixed;
  p.eta_ = eta;
  return p;
}

StepSizePolicy StepSizePolicy::Universal(PolicyKind kind, double diameter, double g0,
                                         double c) {
  if (!IsUniversal(kind)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(PolicyName(kind)) + " is not a universal policy");
  }
  CheckDiameterAndG0(diameter, g0);
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::kInvalidArgument, "c must be positive and finite");
  }
  StepSizePolicy p;
  p.kind_ = kind;
  p.diameter_ = diameter;
  p.g0_ = g0;
  p.c_ = c;
  p.accumulator_ = g0 * g0;
  return p;
}

StepSizePolicy StepSizePolicy::AdaptiveLbeta(double diameter, double g0, double theta,
                                             double k) {
  CheckDiameterAndG0(diameter, g0);
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "theta must lie in (0, 1)");
  }
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidArgument, "K must be > 0");
  StepSizePolicy p;
  p.kind_ = PolicyKind::kAdaptiveLbeta;
  p.diameter_ = diameter;
  p.g0_ = g0;
  p.theta_ = theta;
  p.k_ = k;
  p.eta_ = diameter / std::fabs(g0);
  return p;
}

double StepSizePolicy::DefaultC(PolicyKind kind, bool smooth_problem) {
  switch (kind) {
    case PolicyKind::kBregmanSmooth: return std::sqrt(2.0);
    case PolicyKind::kUniversalNorm: return std::sqrt(5.0);
    case PolicyKind::kStochastic: return smooth_problem ? 5.0 : 1.0;
    default: return 1.0;
  }
}

double StepSizePolicy::StepSize() const {
  if (IsUniversal(kind_)) return diameter_ / std::sqrt(accumulator_);
  return eta_;
}

double StepSizePolicy::ZStatistic(const BregmanGeometry& g,
                                  std::span<const double> y_prev,
                                  std::span<const double> x_t,
                                  std::span<const double> y_t, double eta) {
  CheckEta(eta);
  double num = 0.0;
  double c = c_;
  switch (kind_) {
    case PolicyKind::kBregmanSmooth:
      num = g.Divergence(x_t, y_prev);
      break;
    case PolicyKind::kUniversalNorm: {
      const double a = g.Norm(Sub(x_t, y_prev));
      const double b = g.Norm(Sub(x_t, y_t));
      num = a * a + b * b;
      break;
    }
    case PolicyKind::kBregmanBounded:
    case PolicyKind::kStochastic:
      num = g.Divergence(x_t, y_prev) + g.Divergence(y_t, x_t);
      break;
    case PolicyKind::kFixed:
    case PolicyKind::kAdaptiveLbeta:
      num = g.Divergence(x_t, y_prev) + g.Divergence(y_t, x_t);
      c = 1.0;
      break;
  }
  const double z_sq = num / (c * c * eta * eta);
  if (IsUniversal(kind_)) accumulator_ += z_sq;
  return std::sqrt(z_sq);
}

void StepSizePolicy::ObserveOperator(const BregmanGeometry& g,
                                     std::span<const double> y_prev,
                                     std::span<const double> x_t,
                                     std::span<const double> m_t,
                                     std::span<const double> g_t) {
  if (kind_ != PolicyKind::kAdaptiveLbeta) return;
  const double div = g.Divergence(x_t, y_prev);
  if (div < 1e-14) return;
  const double lbeta = g.DualNorm(Sub(g_t, m_t)) / std::sqrt(div);
  if (lbeta > 0.0) eta_ = std::min(eta_, theta_ * std::sqrt(k_) / lbeta);
}

SolverState SolverState::Start(Vec y0) {
  SolverState s;
  s.ergodic_sum.assign(y0.size(), 0.0);
  s.x_curr = y0;
  s.y_prev = std::move(y0);
  return s;
}

Vec SolverState::Average() const {
  Vec avg = ergodic_sum;
  if (t == 0) return x_curr;
  const double inv = 1.0 / static_cast<double>(t);
  for (double& v : avg) v *= inv;
  return avg;
}

void MpIterate(SolverState& state, const OracleFn& oracle, const BregmanGeometry& g,
               StepSizePolicy& policy) {
  const double eta = policy.StepSize();
  CheckEta(eta);
  Vec m = oracle(state.y_prev);
  Vec x = g.ProxStep(state.y_prev, m, eta);
  Vec gt = oracle(x);
  Vec y = g.ProxStep(state.y_prev, gt, eta);
  state.z = policy.ZStatistic(g, state.y_prev, x, y, eta);
  policy.ObserveOperator(g, state.y_prev, x, m, gt);
  kernels::Axpy(1.0, x, state.ergodic_sum);
  state.eta = eta;
  state.y_prev = std::move(y);
  state.x_curr = std::move(x);
  state.m_curr = std::move(m);
  state.g_curr = std::move(gt);
  state.t += 1;
}

std::size_t RowStride(std::size_t iterations) {
  constexpr std::size_t kMaxRows = 10000;
  if (iterations <= kMaxRows) return 1;
  return (iterations + kMaxRows - 1) / kMaxRows;
}

RunReport Run(const MonotoneProblem& p, const BregmanGeometry& g, StepSizePolicy policy,
              std::size_t iterations, std::uint64_t seed, const RunOptions& options) {
  if (iterations == 0) throw Error(ErrorCode::kIterationBudgetZero, "T must be >= 1");
  if (g.dimension() != p.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "geometry and problem dimensions differ");
  }
  Vec y0 = options.start ? *options.start : g.Center();
  if (y0.size() != g.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "start point dimension");
  }
  if (!g.Contains(y0)) throw Error(ErrorCode::kBoundaryViolation, "start point infeasible");

  RunReport report;
  report.meta.problem = p.name();
  report.meta.geometry = std::string(GeometryName(g.kind()));
  report.meta.policy = std::string(PolicyName(policy.kind()));
  report.meta.seed = seed;
  report.meta.iterations = iterations;
  report.meta.diameter = policy.diameter();
  report.meta.g0 = policy.g0();
  report.meta.c = policy.c();
  report.meta.sigma = options.noise.active() ? options.noise.sigma : 0.0;
  report.meta.noise = std::string(NoiseName(options.noise.active() ? options.noise.kind
                                                                   : NoiseKind::kNone));
  report.meta.start = options.start_label;

  NoisyOracle noisy(p, options.noise, seed);
  const bool noisy_run = options.noise.active();
  const OracleFn oracle = [&](std::span<const double> x) {
    return noisy_run ? noisy.Sample(x) : p.Evaluate(x);
  };

  const std::optional<Vec>& xstar = p.known_solution();
  const std::size_t stride = RowStride(iterations);
  report.rows.reserve(iterations / stride + 1);
  SolverState state = SolverState::Start(std::move(y0));
  double regret = 0.0;
  double prev_eta = 0.0;
  for (std::size_t t = 1; t <= iterations; ++t) {
    MpIterate(state, oracle, g, policy);
    if (t == 1) {
      report.first_eta = state.eta;
    } else if (state.eta > prev_eta) {
      report.eta_nonincreasing = false;
    }
    prev_eta = state.eta;
    const double op_norm = std::max(g.DualNorm(state.m_curr), g.DualNorm(state.g_curr));
    report.max_z = std::max(report.max_z, state.z);
    report.max_operator_norm = std::max(report.max_operator_norm, op_norm);
    if (xstar) {
      const Vec exact = noisy_run ? p.Evaluate(state.x_curr) : state.g_curr;
      regret += kernels::Dot(exact, state.x_curr) - kernels::Dot(exact, *xstar);
    }
    if (t % stride == 0 || t == iterations) {
      TraceRow row;
      row.t = t;
      row.eta = state.eta;
      row.z = state.z;
      row.gap = p.Gap(state.Average());
      if (xstar) row.cum_regret = regret;
      row.operator_norm = op_norm;
      report.rows.push_back(row);
    }
  }
  report.meta.eta1_above_one = report.first_eta > 1.0;
  report.average = state.Average();
  return report;
}

ZBound ZBoundDetails(const RunReport& report, const MonotoneProblem& p) {
  ZBound out;
  out.max_z = report.max_z;
  const bool native = report.meta.geometry == GeometryName(p.native_geometry());
  const std::optional<double> declared =
      native ? p.Constant(RegularityTag::kLipschitzBounded) : std::nullopt;
  double g_prime = 0.0;
  if (declared) {
    g_prime = *declared + report.meta.sigma;
  } else if (report.max_operator_norm > 0.0 || report.max_z == 0.0) {
    g_prime = report.max_operator_norm;
  } else {
    throw Error(ErrorCode::kMissingConstant, "no G' available for " + p.name());
  }
  out.g_prime = g_prime;
  const double c = report.meta.c;
  const auto kind = ParsePolicy(report.meta.policy).value_or(PolicyKind::kFixed);
  const std::optional<double> m =
      native && report.meta.geometry == GeometryName(GeometryKind::kCubeNorm) &&
              report.meta.sigma == 0.0
          ? p.Constant(RegularityTag::kBregmanBounded)
          : std::nullopt;
  double g_bound = 0.0;
  switch (kind) {
    case PolicyKind::kBregmanSmooth:
      g_bound = g_prime / c;
      out.rule = "G'/c";
      break;
    case PolicyKind::kUniversalNorm:
      g_bound = g_prime;
      out.rule = "G'";
      break;
    case PolicyKind::kBregmanBounded:
    case PolicyKind::kStochastic:
      if (m && kind == PolicyKind::kBregmanBounded) {
        const double mm = *m;
        g_bound = (mm + std::sqrt(6.0 * mm + 3.0 * mm * std::sqrt(mm) + 4.0 * mm * mm)) / c;
        out.rule = "(M+sqrt(6M+3M^1.5+4M^2))/c";
      } else {
        g_bound = std::sqrt(3.0) * g_prime / c;
        out.rule = "sqrt(3)G'/c";
      }
      break;
    case PolicyKind::kFixed:
    case PolicyKind::kAdaptiveLbeta:
      g_bound = std::sqrt(3.0) * g_prime;
      out.rule = "sqrt(3)G'";
      break;
  }
  out.bound = 1.05 * g_bound;
  out.passed = out.max_z <= out.bound;
  return out;
}

bool ZBoundCheck(const RunReport& report, const MonotoneProblem& p) {
  return ZBoundDetails(report, p).passed;
}

}  // namespace mpx
