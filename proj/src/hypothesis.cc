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

#include "mslm/hypothesis.h"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "mslm/error.h"

namespace mslm {
namespace {

double parse_number(std::string_view text, std::string_view context) {
  // from_chars rejects a leading '+'; accept it for convenience.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::kParse, "invalid number '" + std::string(text) + "' in hypothesis '" +
                                       std::string(context) + "'");
  }
  return value;
}

// Shortest text that parses back to the same double.
std::string format_number(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

HypothesisSpec HypothesisSpec::common_intercept() {
  return HypothesisSpec(HypothesisKind::kCommonIntercept, {1.0, 0.0}, 0.0);
}

HypothesisSpec HypothesisSpec::parallelism() {
  return HypothesisSpec(HypothesisKind::kParallelism, {0.0, 1.0}, 0.0);
}

HypothesisSpec HypothesisSpec::concurrent_at(double x0) {
  if (!std::isfinite(x0)) throw Error(ErrorCode::kParameter, "x0 must be finite");
  return HypothesisSpec(HypothesisKind::kConcurrentAt, {1.0, x0}, x0);
}

HypothesisSpec HypothesisSpec::linear(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kParameter, "linear hypothesis constants must be finite");
  }
  if (a == 0.0 && b == 0.0) {
    throw Error(ErrorCode::kParameter, "linear hypothesis needs (a, b) != (0, 0)");
  }
  return HypothesisSpec(HypothesisKind::kLinear, {a, b}, 0.0);
}

HypothesisSpec HypothesisSpec::parse(std::string_view text) {
  if (text == "parallelism") return parallelism();
  if (text == "intercept") return common_intercept();
  constexpr std::string_view kConcurrent = "concurrent:";
  constexpr std::string_view kLinear = "linear:";
  if (text.starts_with(kConcurrent)) {
    return concurrent_at(parse_number(text.substr(kConcurrent.size()), text));
  }
  if (text.starts_with(kLinear)) {
    const std::string_view rest = text.substr(kLinear.size());
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "expected linear:<a>,<b>, got '" + std::string(text) + "'");
    }
    return linear(parse_number(rest.substr(0, comma), text),
                  parse_number(rest.substr(comma + 1), text));
  }
  throw Error(ErrorCode::kParse,
              "unknown hypothesis '" + std::string(text) +
                  "' (expected parallelism, intercept, concurrent:<x0> or linear:<a>,<b>)");
}

std::string HypothesisSpec::to_string() const {
  switch (kind_) {
    case HypothesisKind::kCommonIntercept: return "intercept";
    case HypothesisKind::kParallelism: return "parallelism";
    case HypothesisKind::kConcurrentAt: return "concurrent:" + format_number(x0_);
    case HypothesisKind::kLinear:
      return "linear:" + format_number(coef_.a) + "," + format_number(coef_.b);
  }
  return {};
}

std::string HypothesisSpec::describe() const {
  switch (kind_) {
    case HypothesisKind::kCommonIntercept:
      return "common intercept: alpha_1 = alpha_2 = ... = alpha_R";
    case HypothesisKind::kParallelism:
      return "parallelism: beta_1 = beta_2 = ... = beta_R";
    case HypothesisKind::kConcurrentAt:
      return "concurrence at x0 = " + format_number(x0_) +
             ": alpha_r + beta_r*x0 equal for all r";
    case HypothesisKind::kLinear:
      return "linear: a*alpha_r + b*beta_r equal for all r with a = " +
             format_number(coef_.a) + ", b = " + format_number(coef_.b);
  }
  return {};
}

double weight(const FittedGroup& fit, double a, double b) {
  if (a == 0.0 && b == 0.0) {
    throw Error(ErrorCode::kDegenerateHypothesis, "hypothesis constants (a, b) are both zero");
  }
  const double n = static_cast<double>(fit.n);
  // ||a x - b 1||^2 expanded on the stored summaries. The (0, 1) case is
  // special-cased so parallelism weights come out as exactly sxx.
  if (a == 0.0) return fit.sxx / (b * b);
  const double denom = a * a * fit.x_norm_sq - 2.0 * a * b * fit.x_sum + b * b * n;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::kDegenerateHypothesis,
                "group '" + fit.label + "': ||a x - b 1||^2 is zero; every x equals b/a");
  }
  return n * fit.sxx / denom;
}

HypothesisMatrices build(const ModelSet& models, const HypothesisSpec& spec) {
  const auto [a, b] = spec.coefficients();
  const std::size_t r = models.num_groups();
  const std::size_t q = models.q;

  Mat z(r, q);
  std::vector<double> d(r);
  for (std::size_t i = 0; i < r; ++i) {
    const FittedGroup& g = models.groups[i];
    d[i] = weight(g, a, b);
    for (std::size_t j = 0; j < q; ++j) z(i, j) = a * g.alpha_hat[j] + b * g.beta_hat[j];
  }

  double d_sum = 0.0;
  std::vector<double> zbar(q, 0.0);  // weighted mean of the rows of Z
  for (std::size_t i = 0; i < r; ++i) {
    d_sum += d[i];
    for (std::size_t j = 0; j < q; ++j) zbar[j] += d[i] * z(i, j);
  }
  for (double& v : zbar) v /= d_sum;

  // Centering on the weighted mean first is the same algebra as
  // sum d z z' - (sum d z)(sum d z)'/sum d, without the cancellation.
  Mat s_h(q, q);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const double uj = z(i, j) - zbar[j];
      for (std::size_t k = j; k < q; ++k) s_h(j, k) += d[i] * uj * (z(i, k) - zbar[k]);
    }
  }
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t k = j + 1; k < q; ++k) s_h(k, j) = s_h(j, k);

  return HypothesisMatrices{
      .z = std::move(z),
      .weights = std::move(d),
      .s_h = std::move(s_h),
      .nu_h = r - 1,
  };
}

}  // namespace mslm
