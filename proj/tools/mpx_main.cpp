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

// mpx: experiment runner and property-suite verifier.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "mpx/error.hpp"
#include "mpx/harness.hpp"

namespace {

int RunCommand(const std::string& config_path, const std::map<std::string, std::string>& flags) {
  mpx::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = mpx::ExperimentConfig::FromFile(config_path);
  for (const auto& [key, value] : flags) cfg.Set(key, value);
  const mpx::ExperimentResult result = mpx::RunExperiment(cfg);

  if (cfg.output_path.empty()) {
    mpx::RunReport mean;
    mean.meta = result.reports.front().meta;
    mean.rows = result.mean_trace;
    mpx::WriteCsv(result.reports.size() == 1 ? result.reports.front() : mean, std::cout);
    return 0;
  }
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const mpx::RunReport& r = result.reports[i];
    std::printf("seed %llu: final gap %.6g, max Z %.6g\n",
                static_cast<unsigned long long>(cfg.seeds[i]), r.rows.back().gap, r.max_z);
  }
  if (result.slope) {
    std::printf("mean-gap slope %.4f (r^2 %.4f, window t in [%g, %g])\n", result.slope->slope,
                result.slope->r_squared, result.slope->t_min, result.slope->t_max);
  } else {
    std::printf("mean-gap slope unavailable: %s\n", result.slope_error.c_str());
  }
  for (const std::string& path : result.written) std::printf("wrote %s\n", path.c_str());
  return 0;
}

int VerifyCommand(unsigned seeds) {
  bool ok = true;
  for (unsigned seed = 0; seed < seeds; ++seed) {
    for (const auto& suite : {mpx::LemmaSuite(seed), mpx::GeometrySuite(seed)}) {
      for (const mpx::CheckResult& r : suite.results) {
        const bool pass = r.failures == 0 && r.checks > 0;
        ok = ok && pass;
        std::printf("[%s] seed %u %-36s %zu/%zu %s\n", pass ? "PASS" : "FAIL", seed,
                    r.name.c_str(), r.checks - r.failures, r.checks, r.detail.c_str());
      }
    }
  }
  std::printf("%s\n", ok ? "verify: all checks passed" : "verify: FAILURES");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mirror-prox experiments with universal step sizes"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run a catalog problem and write CSV traces");
  std::string config_path;
  run->add_option("--config", config_path, "key=value config file; flags override it");
  std::map<std::string, std::string> flags;
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"problem", "catalog problem name"},
      {"geometry", "euclidean | entropy | cube"},
      {"policy", "fixed | unorm | bsmooth | bbounded | stoch | adaptlb"},
      {"iters", "iteration budget T"},
      {"seed", "seed or comma-separated seeds"},
      {"sigma", "noise scale (0 = deterministic)"},
      {"noise", "sphere | component"},
      {"g0", "G0 in the step-size accumulator"},
      {"c", "step-size constant"},
      {"force_c", "accept a c that differs from the policy default"},
      {"theta", "adaptive-L_beta shrink factor"},
      {"eta", "step size of the fixed policy"},
      {"diameter", "override for D (must not be smaller than the analytic value)"},
      {"start", "center | skewed | comma-separated point"},
      {"out", "output CSV path"},
  };
  std::map<std::string, std::string> raw;
  for (const auto& [key, help] : keys) run->add_option("--" + key, raw[key], help);

  CLI::App* verify = app.add_subcommand("verify", "run the lemma and geometry property suites");
  unsigned seeds = 10;
  verify->add_option("--seeds", seeds, "number of seeds, starting at 0");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) {
      for (const auto& [key, help] : keys) {
        if (run->count("--" + key) > 0) flags[key] = raw[key];
      }
      return RunCommand(config_path, flags);
    }
    return VerifyCommand(seeds);
  } catch (const mpx::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
