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

// mslm: fit R multivariate simple linear models and test cross-group
// hypotheses (parallelism, common intercept, concurrence, a*alpha + b*beta).
//
//   mslm fit DATA.csv [--format text|json] [--out FILE]
//   mslm test DATA.csv --hypothesis parallelism [--alpha 0.05] [--format json]
//   mslm plot-data DATA.csv [--format csv|json]
//   mslm simulate [--config SIM.json] [--reps N] [--seed S]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mslm/dataset.h"
#include "mslm/error.h"
#include "mslm/montecarlo.h"
#include "mslm/report.h"

namespace {

struct Options {
  std::string input;
  std::string format = "text";
  std::string out;
  std::string hypothesis = "parallelism";
  std::optional<double> x0;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> alpha;
  std::string config;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

mslm::HypothesisSpec resolve_hypothesis(const Options& o) {
  if (o.hypothesis == "concurrent") {
    if (!o.x0) throw mslm::Error(mslm::ErrorCode::kParameter, "--hypothesis concurrent needs --x0");
    return mslm::HypothesisSpec::concurrent_at(*o.x0);
  }
  if (o.hypothesis == "linear") {
    if (!o.a || !o.b) {
      throw mslm::Error(mslm::ErrorCode::kParameter, "--hypothesis linear needs --a and --b");
    }
    return mslm::HypothesisSpec::linear(*o.a, *o.b);
  }
  return mslm::HypothesisSpec::parse(o.hypothesis);
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (format == f) return;
  }
  throw mslm::Error(mslm::ErrorCode::kParameter, "unsupported --format '" + format + "'");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw mslm::Error(mslm::ErrorCode::kIo, "cannot write '" + o.out + "'");
  file << text;
}

void run_fit(const Options& o) {
  require_format(o.format, {"text", "json"});
  const mslm::Dataset data = mslm::ingest_file(o.input);
  const mslm::ModelSet models = mslm::fit_all(data.groups);
  emit(o, o.format == "json" ? mslm::dump(mslm::fit_report_json(data, models))
                             : mslm::fit_report_text(data, models));
}

void run_test(const Options& o) {
  require_format(o.format, {"text", "json"});
  const mslm::Dataset data = mslm::ingest_file(o.input);
  mslm::TestOptions opts{.hypothesis = resolve_hypothesis(o), .alpha = o.alpha.value_or(0.05)};
  const mslm::TestOutcome outcome = mslm::run_test(data, opts);
  emit(o, o.format == "json" ? mslm::dump(mslm::test_report_json(data, outcome))
                             : mslm::test_report_text(data, outcome));
}

void run_plot_data(const Options& o) {
  const std::string format = o.format == "text" ? "csv" : o.format;
  require_format(format, {"csv", "json"});
  const mslm::Dataset data = mslm::ingest_file(o.input);
  const mslm::ModelSet models = mslm::fit_all(data.groups);
  emit(o, format == "json" ? mslm::dump(mslm::plot_data_json(data, models))
                           : mslm::plot_data_csv(data, models));
}

void run_simulate(const Options& o, bool hypothesis_given) {
  require_format(o.format, {"text", "json"});
  mslm::SimConfig config;
  if (o.config.empty()) {
    config = mslm::null_config(2, 2, 15, 5000, 42);
  } else {
    std::ifstream in(o.config);
    if (!in) throw mslm::Error(mslm::ErrorCode::kIo, "cannot open '" + o.config + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw mslm::Error(mslm::ErrorCode::kParse, o.config + ": " + e.what());
    }
    config = mslm::sim_config_from_json(doc);
  }
  if (o.reps) config.replications = *o.reps;
  if (o.seed) config.seed = *o.seed;
  if (o.alpha) config.alpha = *o.alpha;
  if (hypothesis_given) config.hypothesis = resolve_hypothesis(o);
  config.threads = o.threads;

  const std::vector<mslm::SimResult> results = mslm::run(config);
  emit(o, o.format == "json" ? mslm::dump(mslm::sim_report_json(config, results))
                             : mslm::sim_report_text(config, results));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tests across R multivariate simple linear models"};
  app.require_subcommand(1);
  Options o;

  auto add_output = [&o](CLI::App* cmd, const std::string& formats) {
    cmd->add_option("--format", o.format, "Output format: " + formats);
    cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
  };
  auto add_hypothesis = [&o](CLI::App* cmd) {
    cmd->add_option("--hypothesis", o.hypothesis,
                    "parallelism | intercept | concurrent[:x0] | linear[:a,b]");
    cmd->add_option("--x0", o.x0, "Concurrence point for --hypothesis concurrent");
    cmd->add_option("--a", o.a, "Intercept weight for --hypothesis linear");
    cmd->add_option("--b", o.b, "Slope weight for --hypothesis linear");
    cmd->add_option("--alpha", o.alpha, "Significance level (default 0.05)");
  };

  CLI::App* fit = app.add_subcommand("fit", "Per-group estimates and pooled S_E");
  fit->add_option("input", o.input, "CSV with header group,x,y1,...,yq")->required();
  add_output(fit, "text|json");

  CLI::App* test = app.add_subcommand("test", "Test a cross-group hypothesis");
  test->add_option("input", o.input, "CSV with header group,x,y1,...,yq")->required();
  add_hypothesis(test);
  add_output(test, "text|json");

  CLI::App* plot = app.add_subcommand("plot-data", "Observed points and fitted lines");
  plot->add_option("input", o.input, "CSV with header group,x,y1,...,yq")->required();
  add_output(plot, "csv|json");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo size/power across error families");
  sim->add_option("--config", o.config, "Simulation config JSON (default: 2 groups, q = 2, x = 1..15, null)");
  sim->add_option("--reps", o.reps, "Replications per family");
  sim->add_option("--seed", o.seed, "Base seed");
  sim->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
  add_hypothesis(sim);
  add_output(sim, "text|json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) run_fit(o);
    else if (*test) run_test(o);
    else if (*plot) run_plot_data(o);
    else if (*sim) run_simulate(o, sim->count("--hypothesis") > 0);
  } catch (const mslm::Error& e) {
    std::cerr << "error: " << mslm::error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: INTERNAL: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
