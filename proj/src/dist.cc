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

#include "mslm/dist.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mslm/error.h"

namespace mslm {
namespace {

constexpr int kMaxFractionTerms = 10000;
constexpr double kFractionEps = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz. Converges fast for
// x < (a + 1) / (a + b + 2).
double beta_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kFractionEps) return h;
  }
  throw Error(ErrorCode::kNumeric, "incomplete beta continued fraction did not converge");
}

void require_df(double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0) || !std::isfinite(df1) || !std::isfinite(df2)) {
    throw Error(ErrorCode::kParameter, "F degrees of freedom must be positive, got (" +
                                           std::to_string(df1) + ", " + std::to_string(df2) +
                                           ")");
  }
}

FStat make_fstat(double value, double df1, double df2, bool exact, std::string branch) {
  return FStat{
      .value = value,
      .df1 = df1,
      .df2 = df2,
      .p_value = f_sf(value, df1, df2),
      .exact = exact,
      .branch = std::move(branch),
  };
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::kParameter, "incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kParameter, "incomplete beta argument outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(x, a, b) / a;
  return 1.0 - front * beta_fraction(1.0 - x, b, a) / b;
}

double f_cdf(double x, double df1, double df2) {
  require_df(df1, df2);
  if (!(x >= 0.0)) throw Error(ErrorCode::kParameter, "F value must be >= 0");
  if (std::isinf(x)) return 1.0;
  const double t = df1 * x;
  return incomplete_beta(t / (t + df2), df1 / 2.0, df2 / 2.0);
}

double f_sf(double x, double df1, double df2) {
  require_df(df1, df2);
  if (!(x >= 0.0)) throw Error(ErrorCode::kParameter, "F value must be >= 0");
  if (std::isinf(x)) return 0.0;
  const double t = df1 * x;
  return incomplete_beta(df2 / (df2 + t), df2 / 2.0, df1 / 2.0);
}

double f_quantile(double p, double df1, double df2) {
  require_df(df1, df2);
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorCode::kParameter, "quantile level outside [0, 1)");
  if (p == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, df1, df2) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorCode::kNumeric, "F quantile bracket overflow");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f_cdf(mid, df1, df2) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

FStat wilks_pvalue(const CriteriaValues& cv) {
  const double lambda = cv.wilks;
  const double q = static_cast<double>(cv.q);
  const double nh = static_cast<double>(cv.nu_h);
  const double ne = static_cast<double>(cv.nu_e);
  const double odds = (1.0 - lambda) / lambda;  // Lambda = 1 gives exactly 0

  if (cv.nu_h == 1) {
    const double df2 = ne - q + 1.0;
    return make_fstat(odds * df2 / q, q, df2, true, "exact: nu_H = 1");
  }
  if (cv.q == 1) {
    return make_fstat(odds * ne / nh, nh, ne, true, "exact: q = 1");
  }
  const double root = std::sqrt(lambda);
  const double root_odds = (1.0 - root) / root;
  if (cv.q == 2) {
    return make_fstat(root_odds * (ne - 1.0) / nh, 2.0 * nh, 2.0 * (ne - 1.0), true,
                      "exact: q = 2");
  }
  if (cv.nu_h == 2) {
    const double df2 = ne - q + 1.0;
    return make_fstat(root_odds * df2 / q, 2.0 * q, 2.0 * df2, true, "exact: nu_H = 2");
  }

  // Rao's approximation; min(q, nu_H) >= 3 here so the root is well defined.
  const double t = std::sqrt((q * q * nh * nh - 4.0) / (q * q + nh * nh - 5.0));
  const double df1 = q * nh;
  const double w = ne + nh - (q + nh + 1.0) / 2.0;
  const double df2 = w * t - (q * nh - 2.0) / 2.0;
  const double lt = std::pow(lambda, 1.0 / t);
  return make_fstat((1.0 - lt) / lt * df2 / df1, df1, df2, false, "Rao F approximation");
}

FStat pillai_pvalue(const CriteriaValues& cv) {
  const double s = static_cast<double>(cv.s);
  const double v = cv.pillai;
  if (!(s - v > 0.0)) {
    throw Error(ErrorCode::kBoundary, "Pillai trace " + std::to_string(v) +
                                          " is at its upper bound s = " + std::to_string(cv.s));
  }
  const double num = 2.0 * cv.m + s + 1.0;
  const double den = 2.0 * cv.h + s + 1.0;
  return make_fstat(den / num * v / (s - v), s * num, s * den, cv.s == 1,
                    cv.s == 1 ? "exact: s = 1" : "F approximation");
}

FStat lh_pvalue(const CriteriaValues& cv) {
  const double s = static_cast<double>(cv.s);
  const double num = 2.0 * cv.m + s + 1.0;
  const double df2 = 2.0 * (s * cv.h + 1.0);
  return make_fstat(cv.lawley_hotelling * df2 / (s * s * num), s * num, df2, cv.s == 1,
                    cv.s == 1 ? "exact: s = 1" : "F approximation");
}

FStat roy_bound(const CriteriaValues& cv) {
  const double d = static_cast<double>(std::max(cv.q, cv.nu_h));
  const double df2 = static_cast<double>(cv.nu_e) - d + static_cast<double>(cv.nu_h);
  const double lambda1 = cv.lambdas.empty() ? 0.0 : cv.lambdas.front();
  return make_fstat(lambda1 * df2 / d, d, df2, false, "upper bound");
}

double wilks_critical_value(double alpha, std::size_t q, std::size_t nu_h, std::size_t nu_e) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kParameter, "alpha outside (0, 1)");
  CriteriaValues cv;
  cv.q = q;
  cv.nu_h = nu_h;
  cv.nu_e = nu_e;
  // p-value is increasing in lambda; bisect for p(lambda) = alpha.
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    cv.wilks = 0.5 * (lo + hi);
    if (wilks_pvalue(cv).p_value < alpha) lo = cv.wilks;
    else hi = cv.wilks;
  }
  return 0.5 * (lo + hi);
}

LhCritical lh_critical_value(double alpha, const SmhParams& smh) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kParameter, "alpha outside (0, 1)");
  const double num = 2.0 * smh.m + smh.s + 1.0;
  const double df1 = smh.s * num;
  const double df2 = 2.0 * (smh.s * smh.h + 1.0);
  const double f = f_quantile(1.0 - alpha, df1, df2);
  return LhCritical{
      .f_critical = f,
      .u_critical = f * smh.s * smh.s * num / df2,
      .df1 = df1,
      .df2 = df2,
  };
}

}  // namespace mslm
