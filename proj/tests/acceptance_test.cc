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

// Release acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mslm/dataset.h"
#include "mslm/dist.h"
#include "mslm/error.h"
#include "mslm/hypothesis.h"
#include "mslm/model.h"
#include "mslm/montecarlo.h"
#include "mslm/teststats.h"
#include "test_support.h"

namespace {

using namespace mslm;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Failure messages for one criterion; keeps the first few.
class Check {
 public:
  void near(double got, double want, double tol, const std::string& what) {
    const double dev = std::abs(got - want);
    if (!(dev <= tol)) fail(what + ": got " + fmt(got) + ", want " + fmt(want) + " +/- " + fmt(tol));
  }
  void below(double got, double limit, const std::string& what) {
    if (!(got <= limit)) fail(what + ": " + fmt(got) + " exceeds " + fmt(limit));
  }
  void truth(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  void fail(const std::string& msg) {
    if (failures_.size() < 3) failures_.push_back(msg);
    ++failure_count_;
  }
  bool ok() const { return failure_count_ == 0; }
  std::string detail() const {
    std::string s;
    for (const auto& f : failures_) s += "\n      " + f;
    if (failure_count_ > failures_.size())
      s += "\n      (" + std::to_string(failure_count_ - failures_.size()) + " more)";
    return s;
  }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t failure_count_ = 0;
};

struct Outcome {
  bool pass;
  std::string summary;
};

Outcome guarded(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

Outcome golden_fit() {
  Check c;
  const auto start = Clock::now();
  const Dataset data = ingest_file(testing::data_path("table1.csv"));
  const ModelSet models = fit_all(data.groups);
  const double elapsed = seconds_since(start);

  const double alpha[2][2] = {{66.521429, 4.75238095}, {56.416286, 4.83647619}};
  const double beta[2][2] = {{1.571321, 0.13378571}, {1.300964, 0.05660714}};
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t j = 0; j < 2; ++j) {
      c.near(models.groups[r].alpha_hat[j], alpha[r][j], 1e-4, "alpha");
      c.near(models.groups[r].beta_hat[j], beta[r][j], 1e-4, "beta");
    }
  }
  const double se[2][2] = {{65.625451, 3.9069754}, {3.906975, 0.3025506}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) c.near(models.pooled_se(i, j), se[i][j], 1e-3, "S_E");
  c.below(elapsed, 0.1, "runtime (s)");
  return {c.ok(), "estimates and S_E within tolerance, " + Check::fmt(elapsed * 1e3) + " ms" +
                      c.detail()};
}

Outcome golden_sh() {
  Check c;
  const ModelSet models = fit_all(ingest_file(testing::data_path("table1.csv")).groups);
  const double par[2][2] = {{10.233018, 2.9212089}, {2.921209, 0.8339145}};
  const double icp[2][2] = {{172.934851, -1.43916793}, {-1.439168, 0.01197679}};
  const Mat sp = build(models, HypothesisSpec::parallelism()).s_h;
  const Mat si = build(models, HypothesisSpec::common_intercept()).s_h;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      c.near(sp(i, j), par[i][j], 1e-3, "parallelism S_H");
      c.near(si(i, j), icp[i][j], 1e-3, "intercept S_H");
    }
  }
  return {c.ok(), "parallelism and intercept S_H within 1e-3" + c.detail()};
}

Outcome golden_criteria() {
  Check c;
  const ModelSet models = fit_all(ingest_file(testing::data_path("table1.csv")).groups);
  struct Golden {
    HypothesisSpec spec;
    double wilks, roy_pillai, lh, lh_tol;
  };
  const Golden cases[] = {
      {HypothesisSpec::parallelism(), 0.1159631, 0.8840369, 7.62343, 2e-3},
      {HypothesisSpec::common_intercept(), 0.06658425, 0.9334158, 14.01857, 5e-3},
  };
  std::string pvals;
  for (const Golden& g : cases) {
    const HypothesisMatrices hm = build(models, g.spec);
    const CriteriaValues cv = compute_criteria(hm.s_h, models.pooled_se, hm.nu_h, models.nu_e);
    const std::string name = g.spec.to_string();
    c.near(cv.wilks, g.wilks, 1e-5, name + " Wilks");
    c.near(cv.roy, g.roy_pillai, 1e-5, name + " Roy");
    c.near(cv.pillai, g.roy_pillai, 1e-5, name + " Pillai");
    c.near(cv.lawley_hotelling, g.lh, g.lh_tol, name + " Lawley-Hotelling");
    for (const FStat& f : {wilks_pvalue(cv), roy_bound(cv), pillai_pvalue(cv), lh_pvalue(cv)}) {
      c.truth(f.p_value <= 0.05, name + " not rejected (" + f.branch + ")");
    }
    pvals += " " + name + " p=" + Check::fmt(wilks_pvalue(cv).p_value);
  }
  return {c.ok(), "Table 2/3 values match; both rejected at 0.05 (Wilks" + pvals + ")" + c.detail()};
}

HypothesisSpec random_spec(std::mt19937_64& rng, int i) {
  std::normal_distribution<double> coef(0.0, 2.0);
  switch (i % 4) {
    case 0: return HypothesisSpec::parallelism();
    case 1: return HypothesisSpec::common_intercept();
    case 2: return HypothesisSpec::concurrent_at(coef(rng));
    default: return HypothesisSpec::linear(coef(rng), coef(rng));
  }
}

Outcome oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  const auto start = Clock::now();
  for (int i = 0; i < 50; ++i) {
    const std::size_t r = 2 + static_cast<std::size_t>(i) % 3;
    const std::size_t q = 1 + static_cast<std::size_t>(i / 3) % 3;
    // Groups need n > q + 2 to be fittable.
    const auto samples = testing::random_samples(rng, r, q, std::max<std::size_t>(5, q + 3), 12);
    const HypothesisSpec spec = random_spec(rng, i);
    const ModelSet models = fit_all(samples);
    const OracleMatrices oracle = oracle_build(samples, spec);
    const double dh = testing::rel_frobenius(build(models, spec).s_h, oracle.s_h);
    const double de = testing::rel_frobenius(models.pooled_se, oracle.s_e);
    worst = std::max({worst, dh, de});
    c.below(dh, 1e-8, "S_H rel. Frobenius (" + spec.to_string() + ")");
    c.below(de, 1e-8, "S_E rel. Frobenius");
  }
  const double elapsed = seconds_since(start);
  c.below(elapsed, 5.0, "runtime (s)");
  return {c.ok(), "50 instances, worst rel. Frobenius " + Check::fmt(worst) + ", " +
                      Check::fmt(elapsed) + " s" + c.detail()};
}

Outcome single_root_identities() {
  Check c;
  std::mt19937_64 rng(515);
  std::vector<std::vector<GroupSample>> datasets = {testing::rose_samples()};
  for (int i = 0; i < 100; ++i) datasets.push_back(testing::random_samples(rng, 2, 1 + i % 4, 8, 14));
  std::size_t cases = 0;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const ModelSet models = fit_all(datasets[d]);
    for (const HypothesisSpec& spec : {HypothesisSpec::parallelism(), HypothesisSpec::common_intercept(),
                                       random_spec(rng, static_cast<int>(d))}) {
      const HypothesisMatrices hm = build(models, spec);
      if (hm.nu_h != 1) continue;
      ++cases;
      const CriteriaValues cv = compute_criteria(hm.s_h, models.pooled_se, hm.nu_h, models.nu_e);
      c.truth(cv.roy == cv.pillai, "Roy != Pillai");
      c.near(cv.wilks, 1.0 / (1.0 + cv.lawley_hotelling), 1e-12, "Wilks vs 1/(1+LH)");
      const double pw = wilks_pvalue(cv).p_value;
      c.near(roy_bound(cv).p_value, pw, 1e-9, "Roy p");
      c.near(pillai_pvalue(cv).p_value, pw, 1e-9, "Pillai p");
      c.near(lh_pvalue(cv).p_value, pw, 1e-9, "Lawley-Hotelling p");
    }
  }
  return {c.ok(), std::to_string(cases) + " nu_H = 1 cases" + c.detail()};
}

Outcome property_suite() {
  Check c;
  std::mt19937_64 rng(606);
  constexpr int kCases = 100;

  for (int i = 0; i < kCases; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
    const Mat h = testing::random_spd(rng, n);
    const Mat e = testing::random_spd(rng, n);
    const Mat t = testing::random_invertible(rng, n);
    const auto base = gen_eigvals(h, e);
    const auto moved =
        gen_eigvals(matmul(matmul(transpose(t), h), t), matmul(matmul(transpose(t), e), t));
    for (std::size_t k = 0; k < n; ++k) c.near(moved[k], base[k], 1e-8 * base[0], "congruence");
  }

  std::uniform_real_distribution<double> weight(0.01, 1000.0);
  for (int i = 0; i < kCases; ++i) {
    std::vector<double> d(2 + static_cast<std::size_t>(i) % 5);
    for (double& v : d) v = weight(rng);
    const Mat p = testing::projection_matrix(d);
    c.below(max_abs(subtract(matmul(p, p), p)), 1e-12, "P^2 - P");
    c.below(max_abs(subtract(p, transpose(p))), 1e-12, "P - P'");
  }

  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int i = 0; i < kCases; ++i) {
    const std::size_t q = 1 + static_cast<std::size_t>(i) % 3;
    GroupSample s = testing::random_samples(rng, 1, q, q + 3, 12).front();
    const FittedGroup base = fit_group(s);
    const double k = shift(rng);
    for (double& v : s.x) v += k;
    const FittedGroup moved = fit_group(s);
    for (std::size_t j = 0; j < q; ++j) {
      const double scale_b = 1.0 + std::abs(base.beta_hat[j]);
      const double scale_a = 1.0 + std::abs(base.alpha_hat[j]) + std::abs(k * base.beta_hat[j]);
      c.near(moved.beta_hat[j], base.beta_hat[j], 1e-9 * scale_b, "x-shift slope");
      c.near(moved.alpha_hat[j], base.alpha_hat[j] - k * base.beta_hat[j], 1e-9 * scale_a,
             "x-shift intercept");
    }
    c.below(testing::rel_frobenius(moved.resid_sscp, base.resid_sscp), 1e-9, "x-shift S_E");
  }

  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (int i = 0; i < kCases; ++i) {
    const std::size_t q = 1 + static_cast<std::size_t>(i) % 3;
    auto samples = testing::random_samples(rng, 2 + static_cast<std::size_t>(i) % 3, q, q + 3, 12);
    const HypothesisSpec spec = random_spec(rng, i);
    const ModelSet m0 = fit_all(samples);
    const HypothesisMatrices h0 = build(m0, spec);
    const CriteriaValues c0 = compute_criteria(h0.s_h, m0.pooled_se, h0.nu_h, m0.nu_e);
    std::vector<double> t(q);
    for (double& v : t) v = factor(rng);
    for (GroupSample& s : samples)
      for (std::size_t r = 0; r < s.y.rows(); ++r)
        for (std::size_t j = 0; j < q; ++j) s.y(r, j) *= t[j];
    const ModelSet m1 = fit_all(samples);
    const HypothesisMatrices h1 = build(m1, spec);
    const CriteriaValues c1 = compute_criteria(h1.s_h, m1.pooled_se, h1.nu_h, m1.nu_e);
    c.near(c1.wilks, c0.wilks, 1e-8 * c0.wilks, "rescaled Wilks");
    c.near(c1.roy, c0.roy, 1e-8 * (c0.roy + 1e-300), "rescaled Roy");
    c.near(c1.pillai, c0.pillai, 1e-8 * (c0.pillai + 1e-300), "rescaled Pillai");
    c.near(c1.lawley_hotelling, c0.lawley_hotelling, 1e-8 * (c0.lawley_hotelling + 1e-300),
           "rescaled Lawley-Hotelling");
  }
  return {c.ok(), "4 properties x " + std::to_string(kCases) + " cases" + c.detail()};
}

Outcome elliptical_invariance() {
  Check c;
  const auto start = Clock::now();
  const auto results = run(null_config(2, 2, 15, 5000, 42));
  const double elapsed = seconds_since(start);
  std::ostringstream rates;
  std::vector<double> size;
  for (const SimResult& r : results) {
    size.push_back(r.criterion("wilks").rejection_rate);
    c.truth(r.completed == 5000, r.family + " completed " + std::to_string(r.completed));
    rates << " " << r.family << "=" << Check::fmt(size.back());
  }
  c.truth(size.size() == 3, "expected three families");
  c.truth(size[0] >= 0.04 && size[0] <= 0.06, "Gaussian size outside [0.04, 0.06]");
  for (std::size_t i = 0; i < size.size(); ++i)
    for (std::size_t j = i + 1; j < size.size(); ++j)
      c.below(std::abs(size[i] - size[j]), 0.015, "size difference");
  c.below(elapsed, 60.0, "runtime (s)");
  return {c.ok(), "Wilks size" + rates.str() + ", " + Check::fmt(elapsed) + " s" + c.detail()};
}

Outcome univariate_reduction() {
  Check c;
  std::mt19937_64 rng(808);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto samples = testing::random_samples(rng, 2 + static_cast<std::size_t>(i) % 4, 1, 5, 12);
    const ModelSet models = fit_all(samples);
    const HypothesisMatrices hm = build(models, HypothesisSpec::parallelism());
    const FStat f = wilks_pvalue(compute_criteria(hm.s_h, models.pooled_se, hm.nu_h, models.nu_e));
    const testing::AncovaF oracle = testing::ancova_slope_f(samples);
    const double p = testing::f_sf_quadrature(oracle.f, oracle.df1, oracle.df2);
    worst = std::max(worst, std::abs(f.p_value - p));
    c.near(f.p_value, p, 1e-9, "p-value");
    c.truth(f.df1 == oracle.df1 && f.df2 == oracle.df2, "degrees of freedom");
  }
  return {c.ok(), "20 datasets, worst |dp| " + Check::fmt(worst) + c.detail()};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"golden fit", golden_fit},
      {"golden S_H", golden_sh},
      {"golden criteria", golden_criteria},
      {"oracle equivalence", oracle_equivalence},
      {"s = 1 identities", single_root_identities},
      {"property suite", property_suite},
      {"elliptical invariance", elliptical_invariance},
      {"univariate reduction", univariate_reduction},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    const Outcome o = guarded(fn);
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", ++index, name, o.summary.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
