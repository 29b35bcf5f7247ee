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

#include "mpx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "mpx/error.hpp"
#include "mpx/kernels.hpp"

namespace mpx {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double ParseDouble(const std::string& key, const std::string& text) {
  const std::string v = Trim(text);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw Error(ErrorCode::kInvalidArgument, key + ": not a number: '" + text + "'");
  }
  return d;
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& text) {
  const std::string v = Trim(text);
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, key + ": not an unsigned integer: '" + text + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, key + ": out of range: '" + text + "'");
  }
}

bool ParseBool(const std::string& key, const std::string& text) {
  const std::string v = Trim(text);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error(ErrorCode::kInvalidArgument, key + ": not a boolean: '" + text + "'");
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string SeedPath(const std::string& path, std::uint64_t seed) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string suffix = "-seed" + std::to_string(seed);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

bool HasSmoothTag(const MonotoneProblem& p) {
  return p.Constant(RegularityTag::kLipschitzSmooth) ||
         p.Constant(RegularityTag::kBregmanSmooth);
}

}  // namespace

// --- Config ----------------------------------------------------------------

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : Split(text, ',')) seeds.push_back(ParseUnsigned("seed", item));
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "seed list is empty");
  return seeds;
}

void ExperimentConfig::Set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = Trim(raw_key);
  const std::string value = Trim(raw_value);
  if (key == "problem") {
    problem = value;
  } else if (key == "geometry") {
    geometry = ParseGeometry(value);
    if (!geometry) throw Error(ErrorCode::kInvalidArgument, "unknown geometry '" + value + "'");
  } else if (key == "policy") {
    const auto k = ParsePolicy(value);
    if (!k) throw Error(ErrorCode::kInvalidArgument, "unknown policy '" + value + "'");
    policy = *k;
  } else if (key == "iters") {
    iterations = ParseUnsigned(key, value);
  } else if (key == "seed") {
    seeds = ParseSeedList(value);
  } else if (key == "sigma") {
    sigma = ParseDouble(key, value);
  } else if (key == "noise") {
    const auto k = ParseNoise(value);
    if (!k) throw Error(ErrorCode::kInvalidArgument, "unknown noise '" + value + "'");
    noise = *k;
  } else if (key == "diameter") {
    diameter = ParseDouble(key, value);
  } else if (key == "g0") {
    g0 = ParseDouble(key, value);
  } else if (key == "c") {
    c = ParseDouble(key, value);
  } else if (key == "force_c") {
    force_c = ParseBool(key, value);
  } else if (key == "theta") {
    theta = ParseDouble(key, value);
  } else if (key == "eta") {
    eta = ParseDouble(key, value);
  } else if (key == "start") {
    start = value;
  } else if (key == "out") {
    output_path = value;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  }
}

ExperimentConfig ExperimentConfig::FromText(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line " + std::to_string(lineno) + ": expected key=value");
    }
    cfg.Set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return FromText(buf.str());
}

void ExperimentConfig::Validate() const {
  if (problem.empty()) throw Error(ErrorCode::kInvalidArgument, "problem is required");
  if (iterations == 0) throw Error(ErrorCode::kIterationBudgetZero, "iters must be >= 1");
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "seed list is empty");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  }
  if (c && !force_c) {
    const double v = *c;
    auto near = [v](double ref) { return std::fabs(v - ref) <= 1e-12 * ref; };
    bool ok = true;
    switch (policy) {
      case PolicyKind::kBregmanSmooth: ok = near(std::sqrt(2.0)); break;
      case PolicyKind::kBregmanBounded: ok = near(1.0); break;
      case PolicyKind::kUniversalNorm: ok = near(std::sqrt(5.0)); break;
      case PolicyKind::kStochastic: ok = near(1.0) || near(5.0); break;
      default: ok = false; break;
    }
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  "c=" + FormatDouble(v) + " does not match policy " +
                      std::string(PolicyName(policy)) + "; set force_c=1 to override");
    }
  }
}

// --- Slopes ----------------------------------------------------------------

SlopeEstimate FitLogLog(std::span<const double> t, std::span<const double> gap) {
  if (t.size() != gap.size()) throw Error(ErrorCode::kDimensionMismatch, "t and gap sizes");
  if (t.size() < 2) throw Error(ErrorCode::kTooShort, "need at least two points");
  const std::size_t n = t.size();
  Vec x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gap[i] > 0.0)) {
      throw Error(ErrorCode::kNonPositiveGap, "gap <= 0 at t=" + FormatDouble(t[i]));
    }
    x[i] = std::log(t[i]);
    y[i] = std::log(gap[i]);
  }
  SlopeEstimate out;
  out.t_min = *std::min_element(t.begin(), t.end());
  out.t_max = *std::max_element(t.begin(), t.end());
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
    out.slope = 0.0;
    out.intercept = y[0];
    out.r_squared = 0.0;
    return out;
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kTooShort, "all t values coincide");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss_res += r * r;
  }
  out.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 0.0;
  return out;
}

SlopeEstimate EstimateSlope(const std::vector<std::pair<double, double>>& trace,
                            double window_fraction) {
  if (trace.size() < 10) throw Error(ErrorCode::kTooShort, "trace needs >= 10 points");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "window fraction must lie in (0, 1]");
  }
  const double lo = std::log(trace.front().first);
  const double hi = std::log(trace.back().first);
  const double cut = hi - window_fraction * (hi - lo);
  Vec t, gap;
  for (const auto& [ti, gi] : trace) {
    if (std::log(ti) < cut) continue;
    if (!(gi > 0.0)) {
      throw Error(ErrorCode::kNonPositiveGap, "gap <= 0 at t=" + FormatDouble(ti));
    }
    t.push_back(ti);
    gap.push_back(gi);
  }
  if (t.size() < 2) throw Error(ErrorCode::kTooShort, "fewer than two points in window");
  return FitLogLog(t, gap);
}

// --- Experiments -----------------------------------------------------------

BregmanGeometry MakeGeometry(const ExperimentConfig& cfg, const MonotoneProblem& p) {
  return BregmanGeometry(cfg.geometry.value_or(p.native_geometry()), p.set(), cfg.diameter);
}

StepSizePolicy MakePolicy(const ExperimentConfig& cfg, const MonotoneProblem& p,
                          const BregmanGeometry& g) {
  switch (cfg.policy) {
    case PolicyKind::kFixed:
      return StepSizePolicy::Fixed(cfg.eta);
    case PolicyKind::kAdaptiveLbeta:
      return StepSizePolicy::AdaptiveLbeta(g.diameter(), cfg.g0, cfg.theta);
    default:
      return StepSizePolicy::Universal(
          cfg.policy, g.diameter(), cfg.g0,
          cfg.c.value_or(StepSizePolicy::DefaultC(cfg.policy, HasSmoothTag(p))));
  }
}

RunOptions MakeRunOptions(const ExperimentConfig& cfg, const BregmanGeometry& g) {
  RunOptions opt;
  if (cfg.sigma > 0.0) opt.noise = NoiseModel{cfg.noise, cfg.sigma};
  opt.start_label = cfg.start;
  if (cfg.start == "center") {
    opt.start = std::nullopt;
  } else if (cfg.start == "skewed") {
    opt.start = g.SkewedPoint();
  } else {
    Vec x;
    for (const std::string& item : Split(cfg.start, ',')) x.push_back(ParseDouble("start", item));
    opt.start = std::move(x);
  }
  return opt;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  const MonotoneProblem problem = MakeCatalogProblem(cfg.problem);
  const BregmanGeometry geometry = MakeGeometry(cfg, problem);
  const StepSizePolicy policy = MakePolicy(cfg, problem, geometry);
  const RunOptions options = MakeRunOptions(cfg, geometry);

  std::vector<std::future<RunReport>> futures;
  futures.reserve(cfg.seeds.size());
  for (std::uint64_t seed : cfg.seeds) {
    futures.push_back(std::async(std::launch::async, [&, seed] {
      return Run(problem, geometry, policy, cfg.iterations, seed, options);
    }));
  }
  ExperimentResult result;
  for (auto& f : futures) result.reports.push_back(f.get());

  const std::size_t k = result.reports.size();
  result.mean_trace = result.reports.front().rows;
  for (std::size_t r = 0; r < result.mean_trace.size(); ++r) {
    TraceRow& row = result.mean_trace[r];
    double eta = 0.0, z = 0.0, gap = 0.0, regret = 0.0, op = 0.0;
    bool have_regret = true;
    for (const RunReport& rep : result.reports) {
      const TraceRow& src = rep.rows[r];
      eta += src.eta;
      z += src.z;
      gap += src.gap;
      op += src.operator_norm;
      if (src.cum_regret) {
        regret += *src.cum_regret;
      } else {
        have_regret = false;
      }
    }
    const double inv = static_cast<double>(k);
    row.eta = eta / inv;
    row.z = z / inv;
    row.gap = gap / inv;
    row.operator_norm = op / inv;
    row.cum_regret = have_regret ? std::optional<double>(regret / inv) : std::nullopt;
  }

  std::vector<std::pair<double, double>> trace;
  trace.reserve(result.mean_trace.size());
  for (const TraceRow& row : result.mean_trace) {
    trace.emplace_back(static_cast<double>(row.t), row.gap);
  }
  try {
    result.slope = EstimateSlope(trace);
  } catch (const Error& e) {
    result.slope_error = e.what();
  }

  if (!cfg.output_path.empty()) {
    if (k == 1) {
      EmitCsv(result.reports.front(), cfg.output_path);
      result.written.push_back(cfg.output_path);
    } else {
      std::string seed_list;
      for (std::size_t i = 0; i < k; ++i) {
        const std::string path = SeedPath(cfg.output_path, cfg.seeds[i]);
        EmitCsv(result.reports[i], path);
        result.written.push_back(path);
        seed_list += (i ? "," : "") + std::to_string(cfg.seeds[i]);
      }
      RunReport mean;
      mean.meta = result.reports.front().meta;
      mean.rows = result.mean_trace;
      EmitCsv(mean, cfg.output_path, {{"aggregate", "seed-mean"}, {"seeds", seed_list}});
      result.written.push_back(cfg.output_path);
    }
  }
  return result;
}

// --- Lemma checks ----------------------------------------------------------

InverseSqrtTerms InverseSqrtSum(double a0, std::span<const double> a, double a_max) {
  InverseSqrtTerms out;
  double prefix = a0;
  for (double ai : a) {
    out.middle += ai / std::sqrt(prefix);
    prefix += ai;
  }
  out.lower = std::sqrt(prefix) - std::sqrt(a0);
  out.upper = 2.0 * a_max / std::sqrt(a0) + 3.0 * std::sqrt(a_max) + 3.0 * std::sqrt(prefix);
  return out;
}

InverseSumTerms InverseSum(double a0, std::span<const double> a, double a_max) {
  InverseSumTerms out;
  double prefix = a0;
  for (double ai : a) {
    out.middle += ai / prefix;
    prefix += ai;
  }
  const double head = a.empty() ? 0.0 : prefix - a0 - a.back();
  out.upper = 2.0 + 4.0 * a_max / a0 + 2.0 * std::log1p(head / a0);
  return out;
}

ThreePointTerms ThreePoint(const BregmanGeometry& g, std::span<const double> x,
                           std::span<const double> d, double eta,
                           std::span<const double> p) {
  const Vec xp = g.ProxStep(x, d, eta);
  Vec diff(xp.size());
  for (std::size_t i = 0; i < xp.size(); ++i) diff[i] = xp[i] - p[i];
  ThreePointTerms out;
  out.lhs = eta * kernels::Dot(d, diff);
  out.rhs = g.Divergence(p, x) - g.Divergence(p, xp) - g.Divergence(xp, x);
  return out;
}

bool SuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.failures == 0 && r.checks > 0; });
}

namespace {

struct NamedGeometry {
  std::string name;
  BregmanGeometry geometry;
};

std::vector<NamedGeometry> SuiteGeometries() {
  std::vector<NamedGeometry> out;
  out.push_back({"euclidean/ball", BregmanGeometry(GeometryKind::kEuclidean,
                                                   FeasibleSet::MakeBall(Vec{0.5, -0.25, 0.0}, 1.5))});
  out.push_back({"entropy/simplex",
                 BregmanGeometry(GeometryKind::kNegativeEntropy, FeasibleSet::MakeSimplex(5))});
  out.push_back({"cube/ball", BregmanGeometry(GeometryKind::kCubeNorm,
                                              FeasibleSet::MakeBall(Vec{0.2, 0.0, -0.3}, 2.0))});
  return out;
}

std::vector<NamedGeometry> PropertyGeometries() {
  std::vector<NamedGeometry> out = SuiteGeometries();
  out.push_back({"euclidean/simplex",
                 BregmanGeometry(GeometryKind::kEuclidean, FeasibleSet::MakeSimplex(4))});
  out.push_back({"euclidean/box", BregmanGeometry(GeometryKind::kEuclidean,
                                                  FeasibleSet::MakeBox(Vec{-1, 0, 2}, Vec{1, 0.5, 3}))});
  out.push_back({"entropy/product",
                 BregmanGeometry(GeometryKind::kNegativeEntropy,
                                 FeasibleSet::MakeProduct({FeasibleSet::MakeSimplex(3),
                                                           FeasibleSet::MakeSimplex(2)}))});
  out.push_back({"euclidean/product",
                 BregmanGeometry(GeometryKind::kEuclidean,
                                 FeasibleSet::MakeProduct({FeasibleSet::MakeBall(2, 1.0),
                                                           FeasibleSet::MakeSimplex(3)}))});
  return out;
}

Vec RandomDual(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-2.0, 1.0);
  const double scale = std::pow(10.0, unif(rng));
  Vec d(dim);
  for (double& v : d) v = scale * normal(rng);
  return d;
}

}  // namespace

SuiteReport LemmaSuite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> length(1, 200);
  constexpr std::size_t kSequences = 1000;
  SuiteReport report;

  CheckResult sqrt_check{"inverse-sqrt-sum", 0, 0, ""};
  CheckResult log_check{"inverse-sum-log", 0, 0, ""};
  for (std::size_t s = 0; s < kSequences; ++s) {
    const double a_max = 0.01 + 10.0 * unif(rng);
    const double a0 = 1.0 + 9.0 * unif(rng);
    Vec a(length(rng));
    for (double& v : a) v = unif(rng) < 0.2 ? 0.0 : a_max * unif(rng);
    const InverseSqrtTerms sq = InverseSqrtSum(a0, a, a_max);
    ++sqrt_check.checks;
    if (!(sq.lower <= sq.middle * (1.0 + 1e-12) && sq.middle <= sq.upper)) {
      ++sqrt_check.failures;
    }
    const InverseSumTerms lg = InverseSum(a0, a, a_max);
    ++log_check.checks;
    if (!(lg.middle <= lg.upper)) ++log_check.failures;
  }
  report.results.push_back(sqrt_check);
  report.results.push_back(log_check);

  for (const NamedGeometry& ng : SuiteGeometries()) {
    CheckResult tp{"three-point/" + ng.name, 0, 0, ""};
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < kSequences; ++s) {
      const Vec x = ng.geometry.Sample(rng, 1e-6);
      const Vec p = ng.geometry.Sample(rng, 1e-6);
      const Vec d = RandomDual(rng, x.size());
      const double eta = 0.05 + 1.95 * unif(rng);
      const ThreePointTerms t = ThreePoint(ng.geometry, x, d, eta, p);
      const double scale = 1.0 + std::fabs(t.lhs) + ng.geometry.Divergence(p, x);
      worst = std::max(worst, (t.lhs - t.rhs) / scale);
      ++tp.checks;
      if (t.lhs > t.rhs + 1e-9 * scale) ++tp.failures;
    }
    tp.detail = "max relative excess " + FormatDouble(worst);
    report.results.push_back(tp);
  }

  CheckResult mart{"martingale", 0, 0, ""};
  for (double diameter : {1.0, 2.0, 5.0}) {
    for (MartingaleScenario sc : {MartingaleScenario::kAdaptive, MartingaleScenario::kZero,
                                  MartingaleScenario::kSignedAxis,
                                  MartingaleScenario::kIidFixedX}) {
      const MartingaleCheck mc = MartingaleLemmaCheck(diameter, 2000, 25, rng(), sc);
      ++mart.checks;
      if (!mc.passed) ++mart.failures;
    }
  }
  report.results.push_back(mart);
  return report;
}

SuiteReport GeometrySuite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  constexpr std::size_t kSamples = 300;
  SuiteReport report;
  for (const NamedGeometry& ng : PropertyGeometries()) {
    const BregmanGeometry& g = ng.geometry;
    CheckResult nonneg{"divergence-nonnegative/" + ng.name, 0, 0, ""};
    CheckResult strong{"strong-convexity/" + ng.name, 0, 0, ""};
    CheckResult prox{"prox-feasible/" + ng.name, 0, 0, ""};
    CheckResult optimal{"prox-optimal/" + ng.name, 0, 0, ""};
    CheckResult average{"average-feasible/" + ng.name, 0, 0, ""};
    Vec sum(g.dimension(), 0.0);
    for (std::size_t s = 0; s < kSamples; ++s) {
      const Vec x = g.Sample(rng, 1e-6);
      const Vec y = g.Sample(rng, 1e-6);
      const double dyx = g.Divergence(y, x);
      ++nonneg.checks;
      if (!(dyx >= 0.0) || g.Divergence(x, x) > 1e-12) ++nonneg.failures;
      ++strong.checks;
      if (g.StrongConvexityResidual(y, x) < -1e-9 * (1.0 + dyx)) ++strong.failures;

      const Vec d = RandomDual(rng, x.size());
      const double eta = 0.05 + 1.95 * unif(rng);
      const Vec xp = g.ProxStep(x, d, eta);
      ++prox.checks;
      if (!g.Contains(xp)) ++prox.failures;
      // The prox point minimizes eta <d, z> + D(z, x): no sampled point does better.
      const double best = eta * kernels::Dot(d, xp) + g.Divergence(xp, x);
      const double other = eta * kernels::Dot(d, y) + g.Divergence(y, x);
      ++optimal.checks;
      if (other < best - 1e-9 * (1.0 + std::fabs(best))) ++optimal.failures;

      kernels::Axpy(1.0, xp, sum);
      Vec avg = sum;
      for (double& v : avg) v /= static_cast<double>(s + 1);
      ++average.checks;
      if (!g.Contains(avg)) ++average.failures;
    }
    for (CheckResult* r : {&nonneg, &strong, &prox, &optimal, &average}) {
      report.results.push_back(*r);
    }
  }
  CheckResult cube_root{"cube-radius-root", 0, 0, ""};
  for (std::size_t s = 0; s < kSamples; ++s) {
    const double target = std::pow(10.0, -8.0 + 16.0 * unif(rng));
    const double r = SolveCubeRadius(target);
    ++cube_root.checks;
    if (std::fabs(r * r + r - target) > 1e-10 * (1.0 + target)) ++cube_root.failures;
  }
  report.results.push_back(cube_root);
  return report;
}

// --- Brute-force game oracle -----------------------------------------------

namespace {

// Grid search over a simplex followed by pattern refinement that moves mass
// between pairs of coordinates.
Vec MinimizeOnSimplex(std::size_t dim, std::size_t grid,
                      const std::function<double(const Vec&)>& f) {
  Vec best(dim, 0.0);
  double best_val = std::numeric_limits<double>::infinity();
  Vec p(dim);
  const double inv = 1.0 / static_cast<double>(grid);
  std::vector<std::size_t> counts(dim, 0);
  auto visit = [&]() {
    for (std::size_t i = 0; i < dim; ++i) p[i] = static_cast<double>(counts[i]) * inv;
    const double v = f(p);
    if (v < best_val) {
      best_val = v;
      best = p;
    }
  };
  if (dim == 1) {
    counts[0] = grid;
    visit();
  } else if (dim == 2) {
    for (std::size_t i = 0; i <= grid; ++i) {
      counts = {i, grid - i};
      visit();
    }
  } else {
    for (std::size_t i = 0; i <= grid; ++i) {
      for (std::size_t j = 0; i + j <= grid; ++j) {
        counts = {i, j, grid - i - j};
        visit();
      }
    }
  }
  for (double h = inv; h > 1e-13; h *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
          if (i == k || best[i] < h) continue;
          Vec q = best;
          q[i] -= h;
          q[k] += h;
          const double v = f(q);
          if (v < best_val - 1e-15) {
            best_val = v;
            best = q;
            improved = true;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

GameSolution BruteForceGame(const Matrix& a, std::size_t grid) {
  if (a.rows == 0 || a.cols == 0) throw Error(ErrorCode::kEmptyMatrix, "empty payoff");
  if (a.rows > 3 || a.cols > 3) throw Error(ErrorCode::kTooLarge, "brute force needs m, n <= 3");
  if (grid < 100) throw Error(ErrorCode::kInvalidArgument, "grid must be >= 100");
  auto row_value = [&](const Vec& z) {
    const Vec atz = a.ApplyTranspose(z);
    return *std::max_element(atz.begin(), atz.end());
  };
  auto col_value = [&](const Vec& y) {
    const Vec ay = a.Apply(y);
    return -*std::min_element(ay.begin(), ay.end());
  };
  GameSolution out;
  out.z = MinimizeOnSimplex(a.rows, grid, row_value);
  out.y = MinimizeOnSimplex(a.cols, grid, col_value);
  out.value = row_value(out.z);
  return out;
}

// --- CSV -------------------------------------------------------------------

void WriteCsv(const RunReport& report, std::ostream& out, const MetaLines& extra) {
  const RunMeta& m = report.meta;
  out << "# problem=" << m.problem << '\n'
      << "# geometry=" << m.geometry << '\n'
      << "# policy=" << m.policy << '\n'
      << "# seed=" << m.seed << '\n'
      << "# T=" << m.iterations << '\n'
      << "# D=" << FormatDouble(m.diameter) << '\n'
      << "# G0=" << FormatDouble(m.g0) << '\n'
      << "# c=" << FormatDouble(m.c) << '\n'
      << "# sigma=" << FormatDouble(m.sigma) << '\n'
      << "# noise=" << m.noise << '\n'
      << "# start=" << m.start << '\n'
      << "# eta1_above_one=" << (m.eta1_above_one ? 1 : 0) << '\n';
  for (const auto& [k, v] : extra) out << "# " << k << '=' << v << '\n';
  out << kCsvHeader << '\n';
  for (const TraceRow& row : report.rows) {
    out << row.t << ',' << FormatDouble(row.eta) << ',' << FormatDouble(row.z) << ','
        << FormatDouble(row.gap) << ','
        << (row.cum_regret ? FormatDouble(*row.cum_regret) : std::string("NA")) << '\n';
  }
}

void EmitCsv(const RunReport& report, const std::string& path, const MetaLines& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path + " for writing");
  WriteCsv(report, out, extra);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path);
}

RunReport ReadCsv(std::istream& in) {
  RunReport report;
  RunMeta& m = report.meta;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = Trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "problem") m.problem = value;
      else if (key == "geometry") m.geometry = value;
      else if (key == "policy") m.policy = value;
      else if (key == "seed") m.seed = ParseUnsigned(key, value);
      else if (key == "T") m.iterations = ParseUnsigned(key, value);
      else if (key == "D") m.diameter = ParseDouble(key, value);
      else if (key == "G0") m.g0 = ParseDouble(key, value);
      else if (key == "c") m.c = ParseDouble(key, value);
      else if (key == "sigma") m.sigma = ParseDouble(key, value);
      else if (key == "noise") m.noise = value;
      else if (key == "start") m.start = value;
      else if (key == "eta1_above_one") m.eta1_above_one = value == "1";
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw Error(ErrorCode::kIoFailure, "unexpected CSV header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const std::vector<std::string> cells = Split(line, ',');
    if (cells.size() != 5) {
      throw Error(ErrorCode::kIoFailure, "line " + std::to_string(lineno) + ": expected 5 fields");
    }
    TraceRow row;
    row.t = ParseUnsigned("t", cells[0]);
    row.eta = ParseDouble("eta", cells[1]);
    row.z = ParseDouble("Z", cells[2]);
    row.gap = ParseDouble("gap", cells[3]);
    if (cells[4] != "NA") row.cum_regret = ParseDouble("cum_regret", cells[4]);
    report.rows.push_back(row);
  }
  if (!header_seen) throw Error(ErrorCode::kIoFailure, "missing CSV header");
  return report;
}

RunReport ParseCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  return ReadCsv(in);
}

}  // namespace mpx
