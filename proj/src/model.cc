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

#include "mslm/model.h"

#include <cmath>
#include <utility>

#include "mslm/error.h"

namespace mslm {
namespace {

// sxx at or below this fraction of ||x||^2 is a constant predictor up to
// rounding.
constexpr double kDegenerateSxx = 1e-14;

}  // namespace

FittedGroup fit_group(const GroupSample& sample) {
  const std::size_t n = sample.x.size();
  const std::size_t q = sample.y.cols();
  if (sample.y.rows() != n) {
    throw Error(ErrorCode::kShape, "group '" + sample.label + "': x has " +
                                       std::to_string(n) + " values but Y is " +
                                       sample.y.shape());
  }
  if (n <= 2 || n <= q + 2) {
    throw Error(ErrorCode::kSampleSize,
                "group '" + sample.label + "' has n=" + std::to_string(n) +
                    " observations; need n > q + 2 = " + std::to_string(q + 2));
  }

  double x_sum = 0.0;
  double x_norm_sq = 0.0;
  for (double v : sample.x) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNumeric, "group '" + sample.label + "': non-finite x");
    }
    x_sum += v;
    x_norm_sq += v * v;
  }
  const double nd = static_cast<double>(n);
  const double x_bar = x_sum / nd;

  double sxx = 0.0;
  for (double v : sample.x) sxx += (v - x_bar) * (v - x_bar);
  if (!(sxx > kDegenerateSxx * x_norm_sq) || sxx == 0.0) {
    throw Error(ErrorCode::kDegenerateDesign,
                "group '" + sample.label + "': x is constant, slope is not estimable");
  }

  std::vector<double> y_bar(q, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j) y_bar[j] += sample.y(i, j);
  for (double& v : y_bar) v /= nd;

  // Centered cross products: Syy = Yc'Yc, sxy = Yc'xc.
  Mat syy(q, q);
  std::vector<double> sxy(q, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xc = sample.x[i] - x_bar;
    for (std::size_t j = 0; j < q; ++j) {
      const double yj = sample.y(i, j) - y_bar[j];
      sxy[j] += yj * xc;
      for (std::size_t k = j; k < q; ++k) syy(j, k) += yj * (sample.y(i, k) - y_bar[k]);
    }
  }

  std::vector<double> beta(q);
  std::vector<double> alpha(q);
  for (std::size_t j = 0; j < q; ++j) {
    beta[j] = sxy[j] / sxx;
    alpha[j] = y_bar[j] - beta[j] * x_bar;
  }

  Mat resid(q, q);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t k = j; k < q; ++k) {
      const double v = syy(j, k) - sxy[j] * sxy[k] / sxx;
      resid(j, k) = v;
      resid(k, j) = v;
    }
  }

  return FittedGroup{
      .label = sample.label,
      .alpha_hat = std::move(alpha),
      .beta_hat = std::move(beta),
      .resid_sscp = std::move(resid),
      .n = n,
      .x_bar = x_bar,
      .sxx = sxx,
      .x_norm_sq = x_norm_sq,
      .x_sum = x_sum,
  };
}

ModelSet pool(std::vector<FittedGroup> groups) {
  if (groups.size() < 2) {
    throw Error(ErrorCode::kSampleSize, "need at least 2 groups, got " +
                                            std::to_string(groups.size()));
  }
  const std::size_t q = groups.front().q();
  Mat se(q, q);
  std::size_t total_n = 0;
  for (const FittedGroup& g : groups) {
    if (g.q() != q || g.resid_sscp.rows() != q) {
      throw Error(ErrorCode::kShape, "group '" + g.label + "' has q=" +
                                         std::to_string(g.q()) + ", expected " +
                                         std::to_string(q));
    }
    se = add(se, g.resid_sscp);
    total_n += g.n;
  }
  const std::size_t r2 = 2 * groups.size();
  if (total_n < r2 + q) {
    throw Error(ErrorCode::kDegreesOfFreedom,
                "error degrees of freedom N - 2R = " +
                    std::to_string(static_cast<long long>(total_n) -
                                   static_cast<long long>(r2)) +
                    " is below q = " + std::to_string(q));
  }
  se = symmetrize(se);
  cholesky_spd(se);  // throws kNotPositiveDefinite

  return ModelSet{
      .groups = std::move(groups),
      .q = q,
      .total_n = total_n,
      .nu_e = total_n - r2,
      .pooled_se = std::move(se),
  };
}

ModelSet fit_all(std::span<const GroupSample> samples) {
  std::vector<FittedGroup> fits;
  fits.reserve(samples.size());
  for (const GroupSample& s : samples) fits.push_back(fit_group(s));
  return pool(std::move(fits));
}

}  // namespace mslm
