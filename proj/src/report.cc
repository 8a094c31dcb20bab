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

#include "mslm/report.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "mslm/error.h"

namespace mslm {
namespace {

using nlohmann::json;

json number(double v) { return report_round(v); }

json vector_json(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json matrix_json(const Mat& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i)));
  return out;
}

json fstat_json(const FStat& f) {
  return json{{"F", number(f.value)}, {"df1", number(f.df1)},       {"df2", number(f.df2)},
              {"p", number(f.p_value)}, {"exact", f.exact}, {"branch", f.branch}};
}

json meta_json(const Dataset& data) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"schemaVersion", kSchemaVersion},
              {"responses", data.response_names},
              {"seed", nullptr}};
}

json groups_json(const ModelSet& models) {
  json out = json::array();
  for (const FittedGroup& g : models.groups) {
    out.push_back(json{{"label", g.label},
                       {"n", g.n},
                       {"alpha", vector_json(g.alpha_hat)},
                       {"beta", vector_json(g.beta_hat)},
                       {"xBar", number(g.x_bar)},
                       {"sxx", number(g.sxx)}});
  }
  return out;
}

std::string decision(const FStat& f, double alpha) {
  return f.p_value <= alpha ? "reject" : "fail to reject";
}

std::string fmt(double v, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

void write_matrix(std::ostringstream& os, const std::string& name, const Mat& m) {
  os << name << ":\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (std::size_t j = 0; j < m.cols(); ++j) os << std::setw(18) << fmt(m(i, j));
    os << "\n";
  }
}

void write_groups(std::ostringstream& os, const Dataset& data, const ModelSet& models) {
  std::size_t width = 0;
  for (const std::string& name : data.response_names) width = std::max(width, name.size());
  for (const FittedGroup& g : models.groups) {
    os << "group '" << g.label << "' (n = " << g.n << ")\n";
    for (std::size_t j = 0; j < g.q(); ++j) {
      os << "  " << std::left << std::setw(static_cast<int>(width)) << data.response_names[j] << std::right
         << " alpha = " << std::setw(16) << fmt(g.alpha_hat[j]) << "  beta = " << std::setw(16)
         << fmt(g.beta_hat[j]) << "\n";
    }
  }
}

std::vector<double> parse_vector(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw Error(ErrorCode::kParse, std::string("simulation config: '") + key +
                                       "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const json& v : doc.at(key)) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kParse, std::string("simulation config: '") + key +
                                         "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Mat parse_matrix(const json& doc) {
  if (!doc.is_array() || doc.empty()) {
    throw Error(ErrorCode::kParse, "simulation config: 'sigma' must be a nested array");
  }
  const std::size_t rows = doc.size();
  const std::size_t cols = doc.front().size();
  std::vector<double> entries;
  for (const json& row : doc) {
    if (!row.is_array() || row.size() != cols) {
      throw Error(ErrorCode::kParse, "simulation config: 'sigma' rows must have equal length");
    }
    for (const json& v : row) {
      if (!v.is_number()) throw Error(ErrorCode::kParse, "simulation config: non-numeric sigma");
      entries.push_back(v.get<double>());
    }
  }
  return Mat(rows, cols, std::move(entries));
}

}  // namespace

double report_round(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::strtod(buf, nullptr);
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

TestOutcome run_test(const Dataset& data, const TestOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::kParameter, "alpha must be in (0, 1)");
  }
  ModelSet models = fit_all(data.groups);
  HypothesisMatrices matrices = build(models, options.hypothesis);
  CriteriaValues cv = compute_criteria(matrices.s_h, models.pooled_se, matrices.nu_h,
                                       models.nu_e);

  std::vector<std::string> notes;
  FStat pillai;
  try {
    pillai = pillai_pvalue(cv);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBoundary) throw;
    pillai = FStat{.value = HUGE_VAL, .df1 = 0, .df2 = 0, .p_value = 0.0, .exact = false,
                   .branch = "boundary"};
    notes.push_back(std::string("pillai: ") + e.what() + "; reported as p = 0");
  }

  FStat wilks = wilks_pvalue(cv);
  FStat roy = roy_bound(cv);
  FStat lh = lh_pvalue(cv);

  notes.push_back(
      "roy: the F statistic is an upper bound, so its p-value is a lower bound on the exact "
      "p-value" +
      std::string(cv.s == 1 ? " (with s = 1 the bound is attained and equals the exact F)" : ""));
  notes.push_back("wilks: " + wilks.branch + "; pillai: " + pillai.branch +
                  "; lawleyHotelling: " + lh.branch);

  const SmhParams q1 = standard_smh(cv.nu_h, cv.nu_e, 1);
  notes.push_back("s, m, h use s = min(nuH, q), m = (|nuH - q| - 1)/2, h = (nuE - q - 1)/2 = (" +
                  fmt(static_cast<double>(cv.s)) + ", " + fmt(cv.m) + ", " + fmt(cv.h) +
                  "); the variant with q fixed at 1 gives (" + fmt(q1.s) + ", " + fmt(q1.m) +
                  ", " + fmt(q1.h) + ") and is only valid for a single response");

  const double wcrit = wilks_critical_value(options.alpha, cv.q, cv.nu_h, cv.nu_e);
  const double wcrit_q1 = wilks_critical_value(options.alpha, 1, cv.nu_h, cv.nu_e);
  notes.push_back("wilks critical value at alpha = " + fmt(options.alpha) + ": " + fmt(wcrit) +
                  " (reject when lambda <= it); the q = 1 threshold would be " + fmt(wcrit_q1));

  return TestOutcome{
      .models = std::move(models),
      .hypothesis = options.hypothesis,
      .matrices = std::move(matrices),
      .criteria = std::move(cv),
      .wilks = std::move(wilks),
      .roy = std::move(roy),
      .pillai = std::move(pillai),
      .lawley_hotelling = std::move(lh),
      .alpha = options.alpha,
      .notes = std::move(notes),
  };
}

json fit_report_json(const Dataset& data, const ModelSet& models) {
  return json{{"groups", groups_json(models)},
              {"sE", json{{"matrix", matrix_json(models.pooled_se)}, {"df", models.nu_e}}},
              {"meta", meta_json(data)}};
}

std::string fit_report_text(const Dataset& data, const ModelSet& models) {
  std::ostringstream os;
  write_groups(os, data, models);
  write_matrix(os, "S_E (df = " + std::to_string(models.nu_e) + ")", models.pooled_se);
  return os.str();
}

json test_report_json(const Dataset& data, const TestOutcome& o) {
  const auto [a, b] = o.hypothesis.coefficients();
  json hyp{{"name", o.hypothesis.to_string()},
           {"description", o.hypothesis.describe()},
           {"a", number(a)},
           {"b", number(b)}};
  if (o.hypothesis.kind() == HypothesisKind::kConcurrentAt) hyp["x0"] = number(o.hypothesis.x0());

  const CriteriaValues& cv = o.criteria;
  json z = matrix_json(o.matrices.z);
  return json{
      {"groups", groups_json(o.models)},
      {"hypothesis", hyp},
      {"sE", json{{"matrix", matrix_json(o.models.pooled_se)}, {"df", o.models.nu_e}}},
      {"sH", json{{"matrix", matrix_json(o.matrices.s_h)},
                  {"df", o.matrices.nu_h},
                  {"weights", vector_json(o.matrices.weights)},
                  {"z", z}}},
      {"criteria", json{{"lambdas", vector_json(cv.lambdas)},
                        {"thetas", vector_json(cv.thetas)},
                        {"wilks", number(cv.wilks)},
                        {"roy", number(cv.roy)},
                        {"pillai", number(cv.pillai)},
                        {"lawleyHotelling", number(cv.lawley_hotelling)},
                        {"s", cv.s},
                        {"m", number(cv.m)},
                        {"h", number(cv.h)},
                        {"nuH", cv.nu_h},
                        {"nuE", cv.nu_e},
                        {"q", cv.q}}},
      {"pvalues", json{{"wilks", fstat_json(o.wilks)},
                       {"roy", fstat_json(o.roy)},
                       {"pillai", fstat_json(o.pillai)},
                       {"lawleyHotelling", fstat_json(o.lawley_hotelling)}}},
      {"decisions", json{{"alpha", number(o.alpha)},
                         {"wilks", decision(o.wilks, o.alpha)},
                         {"roy", decision(o.roy, o.alpha)},
                         {"pillai", decision(o.pillai, o.alpha)},
                         {"lawleyHotelling", decision(o.lawley_hotelling, o.alpha)}}},
      {"notes", o.notes},
      {"meta", meta_json(data)},
  };
}

std::string test_report_text(const Dataset& data, const TestOutcome& o) {
  std::ostringstream os;
  os << "H0: " << o.hypothesis.describe() << "\n\n";
  write_groups(os, data, o.models);
  os << "\n";
  write_matrix(os, "S_E (nu_E = " + std::to_string(o.models.nu_e) + ")", o.models.pooled_se);
  write_matrix(os, "S_H (nu_H = " + std::to_string(o.matrices.nu_h) + ")", o.matrices.s_h);

  const CriteriaValues& cv = o.criteria;
  os << "\ns = " << cv.s << ", m = " << fmt(cv.m) << ", h = " << fmt(cv.h) << "\n\n";

  struct Row {
    const char* name;
    double statistic;
    const FStat* f;
  };
  const Row rows[] = {{"Wilks", cv.wilks, &o.wilks},
                      {"Roy", cv.roy, &o.roy},
                      {"Pillai", cv.pillai, &o.pillai},
                      {"Lawley-Hotelling", cv.lawley_hotelling, &o.lawley_hotelling}};
  os << std::left << std::setw(18) << "criterion" << std::right << std::setw(16) << "statistic"
     << std::setw(14) << "F" << std::setw(8) << "df1" << std::setw(8) << "df2" << std::setw(14)
     << "p-value"
     << "  decision (alpha = " << fmt(o.alpha) << ")\n";
  for (const Row& r : rows) {
    os << std::left << std::setw(18) << r.name << std::right << std::setw(16) << fmt(r.statistic)
       << std::setw(14) << fmt(r.f->value, 7) << std::setw(8) << fmt(r.f->df1, 6)
       << std::setw(8) << fmt(r.f->df2, 6) << std::setw(14) << fmt(r.f->p_value, 6) << "  "
       << decision(*r.f, o.alpha) << "\n";
  }
  if (!o.notes.empty()) {
    os << "\nnotes:\n";
    for (const std::string& n : o.notes) os << "  - " << n << "\n";
  }
  return os.str();
}

json plot_data_json(const Dataset& data, const ModelSet& models) {
  json series = json::array();
  for (std::size_t g = 0; g < models.groups.size(); ++g) {
    const FittedGroup& fit = models.groups[g];
    const GroupSample& sample = data.groups[g];
    const auto [lo, hi] = std::minmax_element(sample.x.begin(), sample.x.end());
    for (std::size_t j = 0; j < fit.q(); ++j) {
      json observed = json::array();
      for (std::size_t i = 0; i < sample.x.size(); ++i) {
        observed.push_back(json::array({number(sample.x[i]), number(sample.y(i, j))}));
      }
      const double a = fit.alpha_hat[j];
      const double b = fit.beta_hat[j];
      series.push_back(json{
          {"group", fit.label},
          {"response", data.response_names[j]},
          {"alpha", number(a)},
          {"beta", number(b)},
          {"observed", observed},
          {"fitted", json::array({json::array({number(*lo), number(a + b * *lo)}),
                                  json::array({number(*hi), number(a + b * *hi)})})},
      });
    }
  }
  return json{{"series", series}, {"meta", meta_json(data)}};
}

std::string plot_data_csv(const Dataset& data, const ModelSet& models) {
  std::ostringstream os;
  os << "group,response,kind,x,y\n";
  const json doc = plot_data_json(data, models);
  for (const json& s : doc.at("series")) {
    const std::string prefix =
        s.at("group").get<std::string>() + "," + s.at("response").get<std::string>() + ",";
    for (const json& p : s.at("observed")) {
      os << prefix << "observed," << p[0].dump() << "," << p[1].dump() << "\n";
    }
    for (const json& p : s.at("fitted")) {
      os << prefix << "fitted," << p[0].dump() << "," << p[1].dump() << "\n";
    }
  }
  return os.str();
}

SimConfig sim_config_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kParse, "simulation config must be an object");
    if (!doc.contains("groups") || !doc.at("groups").is_array()) {
      throw Error(ErrorCode::kParse, "simulation config: 'groups' array is required");
    }

    SimConfig config;
    std::size_t q = 0;
    for (const json& g : doc.at("groups")) {
      const std::vector<double> x = parse_vector(g, "x");
      const std::vector<double> intercepts = parse_vector(g, "intercepts");
      const std::vector<double> slopes = parse_vector(g, "slopes");
      if (intercepts.size() != slopes.size() || intercepts.empty()) {
        throw Error(ErrorCode::kShape, "simulation config: intercepts and slopes must match");
      }
      if (q == 0) q = intercepts.size();
      if (intercepts.size() != q) {
        throw Error(ErrorCode::kShape, "simulation config: groups disagree on q");
      }
      Mat coef(2, q);
      for (std::size_t j = 0; j < q; ++j) {
        coef(0, j) = intercepts[j];
        coef(1, j) = slopes[j];
      }
      const std::string label = g.value("label", "group" + std::to_string(config.groups.size() + 1));
      config.groups.push_back(SimGroup{.label = label, .x = x, .coefficients = coef});
    }
    if (q == 0) throw Error(ErrorCode::kParse, "simulation config: no groups");

    const Mat sigma = doc.contains("sigma") ? parse_matrix(doc.at("sigma")) : Mat::identity(q);
    std::vector<std::string> families = {"gaussian", "t:5", "contaminated:0.1,3"};
    if (doc.contains("families")) families = doc.at("families").get<std::vector<std::string>>();
    for (const std::string& f : families) config.families.push_back(parse_family(f, sigma));

    if (doc.contains("hypothesis")) {
      config.hypothesis = HypothesisSpec::parse(doc.at("hypothesis").get<std::string>());
    }
    config.alpha = doc.value("alpha", 0.05);
    config.replications = doc.value("replications", std::size_t{1000});
    config.seed = doc.value("seed", std::uint64_t{0});
    return config;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("simulation config: ") + e.what());
  }
}

json sim_config_to_json(const SimConfig& config) {
  json groups = json::array();
  for (const SimGroup& g : config.groups) {
    std::vector<double> intercepts, slopes;
    for (std::size_t j = 0; j < g.coefficients.cols(); ++j) {
      intercepts.push_back(g.coefficients(0, j));
      slopes.push_back(g.coefficients(1, j));
    }
    groups.push_back(json{{"label", g.label},
                          {"x", vector_json(g.x)},
                          {"intercepts", vector_json(intercepts)},
                          {"slopes", vector_json(slopes)}});
  }
  json families = json::array();
  for (const ErrorFamily& f : config.families) families.push_back(f.label());
  return json{{"groups", groups},
              {"sigma", config.families.empty() ? json::array()
                                                : matrix_json(config.families.front().sigma)},
              {"families", families},
              {"hypothesis", config.hypothesis.to_string()},
              {"alpha", number(config.alpha)},
              {"replications", config.replications},
              {"seed", config.seed}};
}

json sim_report_json(const SimConfig& config, const std::vector<SimResult>& results) {
  json out = json::array();
  for (const SimResult& r : results) {
    json criteria = json::object();
    for (const CriterionResult& c : r.criteria) {
      criteria[c.name] = json{{"rejections", c.rejections},
                              {"rate", number(c.rejection_rate)},
                              {"mean", number(c.statistic.mean)},
                              {"q05", number(c.statistic.q05)},
                              {"q50", number(c.statistic.q50)},
                              {"q95", number(c.statistic.q95)}};
    }
    out.push_back(json{{"family", r.family},
                       {"replications", r.replications},
                       {"completed", r.completed},
                       {"failed", r.failed},
                       {"failures", r.failure_messages},
                       {"criteria", criteria},
                       {"seed", r.seed}});
  }
  return json{{"config", sim_config_to_json(config)},
              {"results", out},
              {"meta", json{{"tool", kToolName},
                            {"version", kToolVersion},
                            {"schemaVersion", kSchemaVersion},
                            {"seed", config.seed},
                            {"prng", kPrngName}}}};
}

std::string sim_report_text(const SimConfig& config, const std::vector<SimResult>& results) {
  std::ostringstream os;
  os << "H0: " << config.hypothesis.describe() << "\n"
     << "replications = " << config.replications << ", alpha = " << fmt(config.alpha)
     << ", seed = " << config.seed << "\nprng: " << kPrngName << "\n\n";
  os << std::left << std::setw(24) << "family" << std::right;
  for (const char* name : {"wilks", "roy", "pillai", "lawley_hotelling"}) {
    os << std::setw(18) << name;
  }
  os << std::setw(8) << "failed" << "\n";
  for (const SimResult& r : results) {
    os << std::left << std::setw(24) << r.family << std::right;
    for (const CriterionResult& c : r.criteria) os << std::setw(18) << fmt(c.rejection_rate, 6);
    os << std::setw(8) << r.failed << "\n";
  }
  return os.str();
}

}  // namespace mslm
