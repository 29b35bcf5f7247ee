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

#ifndef MPX_HARNESS_HPP_
#define MPX_HARNESS_HPP_

// Experiment configuration, seeded runs, rate fits, CSV traces and the
// property suites behind `mpx verify`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpx/geometry.hpp"
#include "mpx/problems.hpp"
#include "mpx/solver.hpp"
#include "mpx/stochastic.hpp"

namespace mpx {

struct ExperimentConfig {
  std::string problem;
  std::optional<GeometryKind> geometry;  // defaults to the problem's native one
  PolicyKind policy = PolicyKind::kBregmanSmooth;
  std::size_t iterations = 1000;
  std::vector<std::uint64_t> seeds = {0};
  double sigma = 0.0;
  NoiseKind noise = NoiseKind::kSphereUniform;
  std::optional<double> diameter;
  double g0 = 1.0;
  std::optional<double> c;
  bool force_c = false;
  double theta = 0.9;
  double eta = 0.1;  // Fixed policy only
  std::string start = "center";  // center | skewed | comma-separated point
  std::string output_path;

  // Applies one key=value setting. Keys: problem, geometry, policy, iters,
  // seed, sigma, noise, diameter, g0, c, force_c, theta, eta, start, out.
  void Set(const std::string& key, const std::string& value);
  // Reads a flat key=value file; '#' starts a comment.
  static ExperimentConfig FromFile(const std::string& path);
  static ExperimentConfig FromText(const std::string& text);
  void Validate() const;
};

std::vector<std::uint64_t> ParseSeedList(const std::string& text);

struct SlopeEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
};

// Ordinary least squares of ln(gap) on ln(t) over all given points.
SlopeEstimate FitLogLog(std::span<const double> t, std::span<const double> gap);

// Fit over the last `window_fraction` of the log-time axis.
SlopeEstimate EstimateSlope(const std::vector<std::pair<double, double>>& trace,
                            double window_fraction = 0.5);

struct ExperimentResult {
  std::vector<RunReport> reports;  // ordered as cfg.seeds
  std::vector<TraceRow> mean_trace;
  std::optional<SlopeEstimate> slope;
  std::string slope_error;
  std::vector<std::string> written;
};

BregmanGeometry MakeGeometry(const ExperimentConfig& cfg, const MonotoneProblem& p);
StepSizePolicy MakePolicy(const ExperimentConfig& cfg, const MonotoneProblem& p,
                          const BregmanGeometry& g);
RunOptions MakeRunOptions(const ExperimentConfig& cfg, const BregmanGeometry& g);

// Runs every seed concurrently, orders results by the seed list and writes
// CSV files when cfg.output_path is set (one seed: that path; several:
// per-seed files with a "-seed<S>" suffix plus the seed-mean trace at the
// path itself).
ExperimentResult RunExperiment(const ExperimentConfig& cfg);

// --- Lemma checks ----------------------------------------------------------

struct InverseSqrtTerms {
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
};
// sqrt(a0 + sum a) - sqrt(a0) <= sum a_i / sqrt(a0 + sum_{j<i} a_j)
//   <= 2 a/sqrt(a0) + 3 sqrt(a) + 3 sqrt(a0 + sum a), with a_i in [0, a].
InverseSqrtTerms InverseSqrtSum(double a0, std::span<const double> a, double a_max);

struct InverseSumTerms {
  double middle = 0.0;
  double upper = 0.0;
};
// sum a_i / (a0 + sum_{j<i} a_j) <= 2 + 4 a/a0 + 2 ln(1 + sum_{i<n} a_i / a0).
InverseSumTerms InverseSum(double a0, std::span<const double> a, double a_max);

struct ThreePointTerms {
  double lhs = 0.0;  // eta <d, x+ - p>
  double rhs = 0.0;  // D(p, x) - D(p, x+) - D(x+, x)
};
ThreePointTerms ThreePoint(const BregmanGeometry& g, std::span<const double> x,
                           std::span<const double> d, double eta,
                           std::span<const double> p);

struct CheckResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckResult> results;
  bool passed() const;
};

SuiteReport LemmaSuite(std::uint64_t seed);
// Divergence nonnegativity, strong convexity, prox feasibility and
// optimality, ergodic-average feasibility.
SuiteReport GeometrySuite(std::uint64_t seed);

// --- Brute-force game oracle -----------------------------------------------

struct GameSolution {
  double value = 0.0;
  Vec z;
  Vec y;
};
GameSolution BruteForceGame(const Matrix& a, std::size_t grid);

// --- CSV -------------------------------------------------------------------

inline constexpr const char* kCsvHeader = "t,eta,Z,gap,cum_regret";

using MetaLines = std::vector<std::pair<std::string, std::string>>;

void WriteCsv(const RunReport& report, std::ostream& out, const MetaLines& extra = {});
void EmitCsv(const RunReport& report, const std::string& path,
             const MetaLines& extra = {});
RunReport ReadCsv(std::istream& in);
RunReport ParseCsv(const std::string& path);

}  // namespace mpx

#endif  // MPX_HARNESS_HPP_
