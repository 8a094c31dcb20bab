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

#include "mslm/montecarlo.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <thread>

#include "mslm/dist.h"
#include "mslm/error.h"
#include "mslm/model.h"
#include "mslm/teststats.h"

namespace mslm {
namespace {

constexpr std::size_t kMinReplications = 100;
constexpr std::size_t kKeptFailureMessages = 5;
constexpr std::array<const char*, 4> kCriterionNames = {"wilks", "roy", "pillai",
                                                        "lawley_hotelling"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(seed) ^ replicate) ^ stream);
}

double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, "invalid number in error family '" + context + "'");
  }
  return v;
}

// Shortest text that parses back to the same double.
std::string format_number(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

struct ReplicateOutcome {
  bool ok = false;
  std::array<double, 4> statistic{};
  std::array<bool, 4> rejected{};
  std::string error;
};

// Linear interpolation between order statistics of a sorted sample.
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ReplicateOutcome run_replicate(const SimConfig& config, const ErrorFamily& family,
                               std::size_t total_n, std::size_t replicate) {
  ReplicateOutcome out;
  try {
    ReplicateStreams streams = replicate_streams(config.seed, replicate);
    const Mat errors = sample_errors(family, total_n, streams);
    const std::size_t q = family.sigma.rows();

    std::vector<GroupSample> samples;
    samples.reserve(config.groups.size());
    std::size_t row = 0;
    for (const SimGroup& g : config.groups) {
      Mat y(g.x.size(), q);
      for (std::size_t i = 0; i < g.x.size(); ++i, ++row) {
        for (std::size_t j = 0; j < q; ++j) {
          y(i, j) = g.coefficients(0, j) + g.coefficients(1, j) * g.x[i] + errors(row, j);
        }
      }
      samples.push_back(GroupSample{.label = g.label, .x = g.x, .y = std::move(y)});
    }

    const ModelSet models = fit_all(samples);
    const HypothesisMatrices hm = build(models, config.hypothesis);
    const CriteriaValues cv = compute_criteria(hm.s_h, models.pooled_se, hm.nu_h, models.nu_e);
    const std::array<FStat, 4> tests = {wilks_pvalue(cv), roy_bound(cv), pillai_pvalue(cv),
                                        lh_pvalue(cv)};
    out.statistic = {cv.wilks, cv.roy, cv.pillai, cv.lawley_hotelling};
    for (std::size_t k = 0; k < tests.size(); ++k) {
      out.rejected[k] = tests[k].p_value <= config.alpha;
    }
    out.ok = true;
  } catch (const Error& e) {
    out.error = "replicate " + std::to_string(replicate) + ": " +
                std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return out;
}

SimResult run_family(const SimConfig& config, const ErrorFamily& family, unsigned threads) {
  std::size_t total_n = 0;
  for (const SimGroup& g : config.groups) total_n += g.x.size();

  const std::size_t reps = config.replications;
  std::vector<ReplicateOutcome> outcomes(reps);
  {
    const std::size_t workers = std::min<std::size_t>(threads, reps);
    const std::size_t chunk = (reps + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t end = std::min(reps, (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) {
          outcomes[i] = run_replicate(config, family, total_n, i);
        }
      });
    }
  }

  // Aggregation walks replicates in index order, so the result does not
  // depend on scheduling.
  SimResult result;
  result.family = family.label();
  result.replications = reps;
  result.seed = config.seed;
  std::array<std::vector<double>, 4> values;
  std::array<std::size_t, 4> rejections{};
  for (const ReplicateOutcome& o : outcomes) {
    if (!o.ok) {
      ++result.failed;
      if (result.failure_messages.size() < kKeptFailureMessages) {
        result.failure_messages.push_back(o.error);
      }
      continue;
    }
    ++result.completed;
    for (std::size_t k = 0; k < 4; ++k) {
      values[k].push_back(o.statistic[k]);
      if (o.rejected[k]) ++rejections[k];
    }
  }

  for (std::size_t k = 0; k < 4; ++k) {
    CriterionResult c;
    c.name = kCriterionNames[k];
    c.rejections = rejections[k];
    c.rejection_rate = result.completed == 0
                           ? 0.0
                           : static_cast<double>(rejections[k]) /
                                 static_cast<double>(result.completed);
    std::vector<double>& v = values[k];
    if (!v.empty()) {
      double sum = 0.0;
      for (double x : v) sum += x;
      c.statistic.mean = sum / static_cast<double>(v.size());
      std::sort(v.begin(), v.end());
      c.statistic.q05 = quantile(v, 0.05);
      c.statistic.q50 = quantile(v, 0.50);
      c.statistic.q95 = quantile(v, 0.95);
    }
    result.criteria.push_back(std::move(c));
  }
  return result;
}

}  // namespace

ErrorFamily ErrorFamily::gaussian(Mat sigma) {
  ErrorFamily f{.kind = FamilyKind::kGaussian, .sigma = std::move(sigma)};
  f.validate();
  return f;
}

ErrorFamily ErrorFamily::student_t(double dof, Mat sigma) {
  ErrorFamily f{.kind = FamilyKind::kStudentT, .dof = dof, .sigma = std::move(sigma)};
  f.validate();
  return f;
}

ErrorFamily ErrorFamily::contaminated_normal(double eps, double scale, Mat sigma) {
  ErrorFamily f{.kind = FamilyKind::kContaminatedNormal,
                .eps = eps,
                .scale = scale,
                .sigma = std::move(sigma)};
  f.validate();
  return f;
}

std::string ErrorFamily::label() const {
  switch (kind) {
    case FamilyKind::kGaussian: return "gaussian";
    case FamilyKind::kStudentT: return "t:" + format_number(dof);
    case FamilyKind::kContaminatedNormal:
      return "contaminated:" + format_number(eps) + "," + format_number(scale);
  }
  return {};
}

void ErrorFamily::validate() const {
  switch (kind) {
    case FamilyKind::kGaussian: break;
    case FamilyKind::kStudentT:
      if (!(dof > 2.0) || !std::isfinite(dof)) {
        throw Error(ErrorCode::kParameter, "Student t degrees of freedom must exceed 2");
      }
      break;
    case FamilyKind::kContaminatedNormal:
      // eps = 0 is allowed: it degenerates to the Gaussian family.
      if (!(eps >= 0.0 && eps < 1.0)) {
        throw Error(ErrorCode::kParameter, "contamination probability must be in [0, 1)");
      }
      if (!(scale > 1.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::kParameter, "contamination scale must exceed 1");
      }
      break;
  }
  try {
    cholesky_spd(sigma);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParameter, std::string("error covariance: ") + e.what());
  }
}

ErrorFamily parse_family(const std::string& text, Mat sigma) {
  if (text == "gaussian") return ErrorFamily::gaussian(std::move(sigma));
  if (text.starts_with("t:")) {
    return ErrorFamily::student_t(parse_double(std::string_view(text).substr(2), text),
                                  std::move(sigma));
  }
  if (text.starts_with("contaminated:")) {
    const std::string_view rest = std::string_view(text).substr(13);
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "expected contaminated:<eps>,<scale>, got '" + text + "'");
    }
    return ErrorFamily::contaminated_normal(parse_double(rest.substr(0, comma), text),
                                            parse_double(rest.substr(comma + 1), text),
                                            std::move(sigma));
  }
  throw Error(ErrorCode::kParse, "unknown error family '" + text +
                                     "' (expected gaussian, t:<dof> or contaminated:<eps>,<scale>)");
}

ReplicateStreams replicate_streams(std::uint64_t seed, std::uint64_t replicate) {
  return ReplicateStreams{
      .noise = std::mt19937_64(stream_seed(seed, replicate, 1)),
      .mixing = std::mt19937_64(stream_seed(seed, replicate, 2)),
  };
}

Mat sample_errors(const ErrorFamily& family, std::size_t n, ReplicateStreams& streams) {
  const Mat l = cholesky_spd(family.sigma);
  const std::size_t q = l.rows();

  Mat z(n, q);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j) z(i, j) = normal(streams.noise);

  double radial = 1.0;
  switch (family.kind) {
    case FamilyKind::kGaussian: break;
    case FamilyKind::kStudentT: {
      std::chi_squared_distribution<double> chi2(family.dof);
      radial = std::sqrt(family.dof / chi2(streams.mixing));
      break;
    }
    case FamilyKind::kContaminatedNormal: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      if (unif(streams.mixing) < family.eps) radial = family.scale;
      break;
    }
  }

  // E = r * Z * L'
  Mat e(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k <= j; ++k) v += z(i, k) * l(j, k);
      e(i, j) = radial * v;
    }
  }
  return e;
}

void SimConfig::validate() const {
  if (groups.size() < 2) throw Error(ErrorCode::kParameter, "simulation needs at least 2 groups");
  if (families.empty()) throw Error(ErrorCode::kParameter, "simulation needs an error family");
  if (replications < kMinReplications) {
    throw Error(ErrorCode::kParameter, "simulation needs at least " +
                                           std::to_string(kMinReplications) + " replications");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kParameter, "alpha outside (0, 1)");
  const std::size_t q = families.front().sigma.rows();
  for (const ErrorFamily& f : families) {
    f.validate();
    if (f.sigma.rows() != q) throw Error(ErrorCode::kShape, "error families disagree on q");
  }
  for (const SimGroup& g : groups) {
    if (g.coefficients.rows() != 2 || g.coefficients.cols() != q) {
      throw Error(ErrorCode::kShape, "group '" + g.label + "' coefficients must be 2x" +
                                         std::to_string(q) + ", got " + g.coefficients.shape());
    }
    if (g.x.empty()) throw Error(ErrorCode::kShape, "group '" + g.label + "' has no x values");
  }
}

const CriterionResult& SimResult::criterion(const std::string& name) const {
  for (const CriterionResult& c : criteria) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::kParameter, "no criterion named '" + name + "'");
}

std::vector<SimResult> run(const SimConfig& config) {
  config.validate();
  unsigned threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SimResult> results;
  results.reserve(config.families.size());
  for (const ErrorFamily& family : config.families) {
    results.push_back(run_family(config, family, threads));
  }
  return results;
}

SimConfig shifted_slopes_config(std::size_t groups, std::size_t q, std::size_t n,
                                double slope_shift, std::size_t replications,
                                std::uint64_t seed) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);

  SimConfig config;
  for (std::size_t r = 0; r < groups; ++r) {
    Mat coef(2, q);
    for (std::size_t j = 0; j < q; ++j) {
      coef(0, j) = 10.0;
      coef(1, j) = 1.0 + slope_shift * static_cast<double>(r);
    }
    config.groups.push_back(
        SimGroup{.label = "group" + std::to_string(r + 1), .x = x, .coefficients = coef});
  }
  config.replications = replications;
  config.seed = seed;
  const Mat sigma = Mat::identity(q);
  config.families = {ErrorFamily::gaussian(sigma), ErrorFamily::student_t(5.0, sigma),
                     ErrorFamily::contaminated_normal(0.1, 3.0, sigma)};
  return config;
}

SimConfig null_config(std::size_t groups, std::size_t q, std::size_t n,
                      std::size_t replications, std::uint64_t seed) {
  return shifted_slopes_config(groups, q, n, 0.0, replications, seed);
}

}  // namespace mslm
