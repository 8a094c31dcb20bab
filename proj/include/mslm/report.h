// Copyright 2026 The mslm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Report assembly for the command-line front end. Everything here is a
// composition of library calls; the CLI only parses flags and writes the
// strings these functions return.
//
// JSON test report (schema version 1), top-level keys:
//   groups     [{label, n, alpha[q], beta[q], xBar, sxx}]
//   hypothesis {name, description, a, b[, x0]}
//   sE         {matrix[q][q], df}
//   sH         {matrix[q][q], df, weights[R], z[R][q]}
//   criteria   {lambdas, thetas, wilks, roy, pillai, lawleyHotelling,
//               s, m, h, nuH, nuE, q}
//   pvalues    {wilks|roy|pillai|lawleyHotelling: {F, df1, df2, p, exact, branch}}
//   decisions  {alpha, wilks|roy|pillai|lawleyHotelling: "reject"|"fail to reject"}
//   notes      [string]
//   meta       {tool, version, schemaVersion, responses, seed (null)}
// Floating-point values carry 10 significant digits.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "mslm/dataset.h"
#include "mslm/dist.h"
#include "mslm/hypothesis.h"
#include "mslm/model.h"
#include "mslm/montecarlo.h"
#include "mslm/teststats.h"

namespace mslm {

inline constexpr const char* kToolName = "mslm";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Rounds to 10 significant digits, the precision used in every report.
double report_round(double v);

struct TestOptions {
  HypothesisSpec hypothesis = HypothesisSpec::parallelism();
  double alpha = 0.05;
};

struct TestOutcome {
  ModelSet models;
  HypothesisSpec hypothesis;
  HypothesisMatrices matrices;
  CriteriaValues criteria;
  FStat wilks;
  FStat roy;
  FStat pillai;
  FStat lawley_hotelling;
  double alpha;
  std::vector<std::string> notes;
};

/// Fits, pools, builds S_H and evaluates all four criteria. A Pillai trace
/// at its boundary is reported as p = 0 with a note instead of failing.
TestOutcome run_test(const Dataset& data, const TestOptions& options);

nlohmann::json fit_report_json(const Dataset& data, const ModelSet& models);
std::string fit_report_text(const Dataset& data, const ModelSet& models);

nlohmann::json test_report_json(const Dataset& data, const TestOutcome& outcome);
std::string test_report_text(const Dataset& data, const TestOutcome& outcome);

/// Observed points and fitted-line endpoints per group and response.
nlohmann::json plot_data_json(const Dataset& data, const ModelSet& models);
/// Same content as rows "group,response,kind,x,y" with kind in
/// {observed, fitted}.
std::string plot_data_csv(const Dataset& data, const ModelSet& models);

/// Simulation config document, all keys optional except where noted:
///   {groups: [{label, x[], intercepts[q], slopes[q]}] (required),
///    sigma: [[q x q]], families: ["gaussian", "t:5", "contaminated:0.1,3"],
///    hypothesis, alpha, replications, seed}
SimConfig sim_config_from_json(const nlohmann::json& doc);
nlohmann::json sim_config_to_json(const SimConfig& config);
nlohmann::json sim_report_json(const SimConfig& config, const std::vector<SimResult>& results);
std::string sim_report_text(const SimConfig& config, const std::vector<SimResult>& results);

/// JSON dump used for every machine-readable output: 2-space indent and a
/// trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace mslm
