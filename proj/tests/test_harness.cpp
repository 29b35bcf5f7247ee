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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mpx/harness.hpp"
#include "test_util.hpp"

namespace mpx {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::path(::testing::TempDir()) / name).string();
}

TEST(FitLogLog, ExactPowerLaws) {
  std::vector<double> t, inv, inv_sqrt;
  for (int i = 1; i <= 1000; ++i) {
    t.push_back(i);
    inv.push_back(3.0 / i);
    inv_sqrt.push_back(0.5 / std::sqrt(double(i)));
  }
  const auto a = FitLogLog(t, inv);
  EXPECT_NEAR(a.slope, -1.0, 1e-12);
  EXPECT_NEAR(std::exp(a.intercept), 3.0, 1e-10);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(FitLogLog(t, inv_sqrt).slope, -0.5, 1e-12);
}

TEST(FitLogLog, ConstantSeriesAndErrors) {
  const std::vector<double> t = {1, 2, 4, 8}, g = {0.3, 0.3, 0.3, 0.3};
  const auto fit = FitLogLog(t, g);
  EXPECT_NEAR(fit.slope, 0.0, 1e-15);
  EXPECT_EQ(fit.r_squared, 0.0);
  EXPECT_MPX_ERROR(FitLogLog(std::vector<double>{1}, std::vector<double>{1}), ErrorCode::kTooShort);
  EXPECT_MPX_ERROR(FitLogLog(std::vector<double>{1, 2}, std::vector<double>{1, 0}),
                   ErrorCode::kNonPositiveGap);
}

TEST(EstimateSlope, WindowsOnLogTime) {
  // Slope -2 early, -1 on the upper half of the log-time axis.
  std::vector<std::pair<double, double>> trace;
  for (int i = 1; i <= 10000; ++i) {
    const double t = i;
    trace.emplace_back(t, t <= 100 ? 1.0 / (t * t) : 1.0 / (100.0 * t));
  }
  const auto s = EstimateSlope(trace);
  EXPECT_NEAR(s.slope, -1.0, 1e-12);
  EXPECT_NEAR(s.t_min, 100.0, 1.0);
  EXPECT_EQ(s.t_max, 10000.0);
  std::vector<std::pair<double, double>> tiny = {{1, 1}, {2, 0.5}};
  EXPECT_MPX_ERROR(EstimateSlope(tiny), ErrorCode::kTooShort);
}

TEST(Lemmas, InverseSqrtExample) {
  const std::vector<double> a = {1, 1, 1};
  const auto r = InverseSqrtSum(1.0, a, 1.0);
  EXPECT_NEAR(r.middle, 1.0 + 1.0 / std::sqrt(2.0) + 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.middle, 2.2845, 1e-4);
  EXPECT_NEAR(r.lower, 1.0, 1e-15);
  EXPECT_NEAR(r.upper, 11.0, 1e-14);
}

TEST(Lemmas, InverseSumExample) {
  const std::vector<double> a = {1, 1, 1};
  const auto r = InverseSum(1.0, a, 1.0);
  EXPECT_NEAR(r.middle, 11.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.upper, 6.0 + 2.0 * std::log(3.0), 1e-14);
  EXPECT_NEAR(r.upper, 8.197, 1e-3);
}

TEST(Lemmas, ThreePointIdentityEuclidean) {
  // For the Euclidean prox without active constraints the inequality is tight.
  const BregmanGeometry g(GeometryKind::kEuclidean, FeasibleSet::MakeBall(2, 10.0));
  const Vec x = {0.1, 0.2}, d = {0.3, -0.4}, p = {1.0, -1.0};
  const auto r = ThreePoint(g, x, d, 0.5, p);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-14);
}

TEST(Lemmas, SuitePassesForTenSeeds) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rep = LemmaSuite(seed);
    for (const auto& r : rep.results) {
      EXPECT_EQ(r.failures, 0u) << "seed " << seed << " " << r.name << ": " << r.detail;
      EXPECT_GT(r.checks, 0u);
    }
    EXPECT_TRUE(rep.passed());
  }
}

TEST(GeometrySuite, Passes) {
  const auto rep = GeometrySuite(4);
  for (const auto& r : rep.results) EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.detail;
  EXPECT_TRUE(rep.passed());
}

TEST(BruteForce, RockPaperScissors) {
  const auto s = BruteForceGame(Matrix::FromRows({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}}), 300);
  EXPECT_NEAR(s.value, 0.0, 1e-9);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(s.z[i], 1.0 / 3.0, 1e-6);
    EXPECT_NEAR(s.y[i], 1.0 / 3.0, 1e-6);
  }
}

TEST(BruteForce, TwoByTwoClosedForm) {
  // Mixed equilibrium of [[a, b], [c, d]]: z1 = (d - c) / (a - b - c + d).
  const double a = 2, b = -1, c = -1, d = 1;
  const auto s = BruteForceGame(Matrix::FromRows({{a, b}, {c, d}}), 1000);
  const double den = a - b - c + d;
  EXPECT_NEAR(s.z[0], (d - c) / den, 1e-6);
  EXPECT_NEAR(s.y[0], (d - b) / den, 1e-6);
  EXPECT_NEAR(s.value, (a * d - b * c) / den, 1e-9);
}

TEST(BruteForce, TrivialAndErrors) {
  const auto s = BruteForceGame(Matrix::FromRows({{1.0}}), 100);
  EXPECT_EQ(s.value, 1.0);
  EXPECT_EQ(s.z, Vec{1.0});
  EXPECT_MPX_ERROR(BruteForceGame(Matrix(4, 4), 100), ErrorCode::kTooLarge);
  EXPECT_MPX_ERROR(BruteForceGame(Matrix::FromRows({{1, 0}, {0, 1}}), 99), ErrorCode::kInvalidArgument);
  EXPECT_MPX_ERROR(BruteForceGame(Matrix(0, 0), 100), ErrorCode::kEmptyMatrix);
}

RunReport SmallReport(bool with_regret) {
  RunReport r;
  r.meta.problem = "quadratic";
  r.meta.geometry = "euclidean";
  r.meta.policy = "bsmooth";
  r.meta.seed = 3;
  r.meta.iterations = 3;
  r.meta.diameter = std::sqrt(8.0);
  r.meta.g0 = 1.0;
  r.meta.c = std::sqrt(2.0);
  r.meta.noise = "none";
  r.meta.start = "center";
  for (std::size_t t = 1; t <= 3; ++t) {
    TraceRow row;
    row.t = t;
    row.eta = 1.0 / (3.0 * t);
    row.z = 0.1 * t + 1e-17;
    row.gap = std::exp(-double(t)) / 7.0;
    if (with_regret) row.cum_regret = -1.0 / 3.0 * t;
    r.rows.push_back(row);
  }
  return r;
}

TEST(Csv, RoundTripIsExact) {
  const RunReport src = SmallReport(true);
  std::ostringstream out;
  WriteCsv(src, out);
  const std::string text = out.str();
  std::istringstream line_stream(text);
  std::string line;
  int data = 0;
  bool header = false;
  while (std::getline(line_stream, line)) {
    if (line == kCsvHeader) header = true;
    else if (!line.empty() && line[0] != '#') ++data;
  }
  EXPECT_TRUE(header);
  EXPECT_EQ(data, 3);
  std::istringstream in(text);
  const RunReport back = ReadCsv(in);
  ASSERT_EQ(back.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.rows[i].t, src.rows[i].t);
    EXPECT_EQ(back.rows[i].eta, src.rows[i].eta);
    EXPECT_EQ(back.rows[i].z, src.rows[i].z);
    EXPECT_EQ(back.rows[i].gap, src.rows[i].gap);
    EXPECT_EQ(back.rows[i].cum_regret, src.rows[i].cum_regret);
  }
  EXPECT_EQ(back.meta.problem, "quadratic");
  EXPECT_EQ(back.meta.seed, 3u);
  EXPECT_EQ(back.meta.diameter, src.meta.diameter);
  EXPECT_EQ(back.meta.c, src.meta.c);
}

TEST(Csv, MissingRegretIsNA) {
  std::ostringstream out;
  WriteCsv(SmallReport(false), out);
  EXPECT_NE(out.str().find(",NA\n"), std::string::npos);
  std::istringstream in(out.str());
  for (const auto& row : ReadCsv(in).rows) EXPECT_FALSE(row.cum_regret.has_value());
}

TEST(Csv, EmptyReportHasHeaderOnly) {
  RunReport empty;
  std::ostringstream out;
  WriteCsv(empty, out);
  std::istringstream in(out.str());
  EXPECT_TRUE(ReadCsv(in).rows.empty());
}

TEST(Csv, SeventeenSignificantDigits) {
  RunReport r = SmallReport(true);
  r.rows.resize(1);
  r.rows[0].eta = 0.1;
  std::ostringstream out;
  WriteCsv(r, out);
  EXPECT_NE(out.str().find("0.10000000000000001"), std::string::npos);
}

TEST(Csv, IoErrors) {
  EXPECT_MPX_ERROR(ParseCsv(TempPath("no-such-dir/x.csv")), ErrorCode::kIoFailure);
  EXPECT_MPX_ERROR(EmitCsv(SmallReport(true), TempPath("no-such-dir/x.csv")), ErrorCode::kIoFailure);
  std::istringstream bad("t,eta\n1,2\n");
  EXPECT_MPX_ERROR(ReadCsv(bad), ErrorCode::kIoFailure);
}

TEST(Config, ParsesFileAndOverrides) {
  auto cfg = ExperimentConfig::FromText(
      "# sample\nproblem = matgame-rps\npolicy=bbounded\niters=250\nseed=1,2,5\nsigma=0.25\n"
      "geometry=entropy\n");
  EXPECT_EQ(cfg.problem, "matgame-rps");
  EXPECT_EQ(cfg.policy, PolicyKind::kBregmanBounded);
  EXPECT_EQ(cfg.iterations, 250u);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 5}));
  EXPECT_EQ(cfg.sigma, 0.25);
  EXPECT_EQ(cfg.geometry, GeometryKind::kNegativeEntropy);
  cfg.Set("iters", "40");
  EXPECT_EQ(cfg.iterations, 40u);
  EXPECT_MPX_ERROR(cfg.Set("colour", "red"), ErrorCode::kInvalidArgument);
  EXPECT_MPX_ERROR(cfg.Set("policy", "armijo"), ErrorCode::kInvalidArgument);
  EXPECT_MPX_ERROR(ExperimentConfig::FromFile(TempPath("missing.cfg")), ErrorCode::kIoFailure);
}

TEST(Config, SeedListParsing) {
  EXPECT_EQ(ParseSeedList("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(ParseSeedList("0, 3,9"), (std::vector<std::uint64_t>{0, 3, 9}));
  EXPECT_ANY_THROW(ParseSeedList("1,x"));
}

TEST(Config, ConstantPairingValidated) {
  ExperimentConfig cfg;
  cfg.problem = "quadratic";
  cfg.policy = PolicyKind::kBregmanSmooth;
  cfg.c = 1.0;
  EXPECT_MPX_ERROR(cfg.Validate(), ErrorCode::kInvalidArgument);
  cfg.force_c = true;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.force_c = false;
  cfg.c = std::sqrt(2.0);
  EXPECT_NO_THROW(cfg.Validate());
  cfg.iterations = 0;
  EXPECT_MPX_ERROR(cfg.Validate(), ErrorCode::kIterationBudgetZero);
}

TEST(Experiment, ErrorsSurface) {
  ExperimentConfig cfg;
  cfg.problem = "no-such-problem";
  EXPECT_MPX_ERROR(RunExperiment(cfg), ErrorCode::kUnknownProblem);
  cfg.problem = "maxquad";
  cfg.geometry = GeometryKind::kNegativeEntropy;
  EXPECT_MPX_ERROR(RunExperiment(cfg), ErrorCode::kIncompatibleGeometry);
  cfg.geometry.reset();
  cfg.iterations = 0;
  EXPECT_MPX_ERROR(RunExperiment(cfg), ErrorCode::kIterationBudgetZero);
  cfg.iterations = 10;
  cfg.output_path = TempPath("no-such-dir/out.csv");
  EXPECT_MPX_ERROR(RunExperiment(cfg), ErrorCode::kIoFailure);
}

TEST(Experiment, DeterministicSeedsAgreeWithoutNoise) {
  ExperimentConfig cfg;
  cfg.problem = "matgame-2x2";
  cfg.iterations = 300;
  cfg.seeds = {1, 2};
  cfg.start = "skewed";
  const auto res = RunExperiment(cfg);
  ASSERT_EQ(res.reports.size(), 2u);
  EXPECT_EQ(res.reports[0].meta.seed, 1u);
  EXPECT_EQ(res.reports[1].meta.seed, 2u);
  for (std::size_t i = 0; i < res.reports[0].rows.size(); ++i) {
    EXPECT_EQ(res.reports[0].rows[i].gap, res.reports[1].rows[i].gap);
    EXPECT_EQ(res.reports[0].rows[i].eta, res.reports[1].rows[i].eta);
  }
  ASSERT_TRUE(res.slope.has_value());
}

TEST(Experiment, SeedMeanTraceAndFiles) {
  ExperimentConfig cfg;
  cfg.problem = "quadratic";
  cfg.policy = PolicyKind::kStochastic;
  cfg.sigma = 0.3;
  cfg.iterations = 200;
  cfg.seeds = {4, 5, 6};
  const std::string path = TempPath("mean.csv");
  cfg.output_path = path;
  const auto res = RunExperiment(cfg);
  ASSERT_EQ(res.reports.size(), 3u);
  ASSERT_EQ(res.mean_trace.size(), 200u);
  for (std::size_t i = 0; i < 200; ++i) {
    double g = 0.0;
    for (const auto& r : res.reports) g += r.rows[i].gap;
    EXPECT_NEAR(res.mean_trace[i].gap, g / 3.0, 1e-15);
  }
  EXPECT_NE(res.reports[0].rows.back().gap, res.reports[1].rows.back().gap);
  EXPECT_EQ(res.written.size(), 4u);
  const auto back = ParseCsv(path);
  ASSERT_EQ(back.rows.size(), 200u);
  EXPECT_EQ(back.rows.back().gap, res.mean_trace.back().gap);
  for (std::uint64_t s : cfg.seeds) {
    const auto per = ParseCsv(TempPath("mean-seed" + std::to_string(s) + ".csv"));
    EXPECT_EQ(per.meta.seed, s);
  }
}

TEST(Experiment, StartOptions) {
  ExperimentConfig cfg;
  cfg.problem = "quadratic";
  const auto prob = MakeCatalogProblem("quadratic");
  const auto g = MakeGeometry(cfg, prob);
  cfg.start = "0.5,-0.25";
  EXPECT_EQ(MakeRunOptions(cfg, g).start, (Vec{0.5, -0.25}));
  cfg.start = "skewed";
  EXPECT_EQ(MakeRunOptions(cfg, g).start, g.SkewedPoint());
}

}  // namespace
}  // namespace mpx
