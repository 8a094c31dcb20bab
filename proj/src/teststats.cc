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

#include "mslm/teststats.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mslm/error.h"

namespace mslm {
namespace {

constexpr double kZeroRootTol = 1e-10;
constexpr double kWilksRouteTol = 1e-9;

}  // namespace

SmhParams standard_smh(std::size_t nu_h, std::size_t nu_e, std::size_t q) {
  const double nh = static_cast<double>(nu_h);
  const double ne = static_cast<double>(nu_e);
  const double qd = static_cast<double>(q);
  return SmhParams{
      .s = std::min(nh, qd),
      .m = (std::abs(nh - qd) - 1.0) / 2.0,
      .h = (ne - qd - 1.0) / 2.0,
  };
}

CriteriaValues compute_criteria(const Mat& s_h, const Mat& s_e, std::size_t nu_h,
                                std::size_t nu_e) {
  const std::size_t q = s_e.rows();
  if (nu_h == 0) throw Error(ErrorCode::kDegreesOfFreedom, "hypothesis df must be >= 1");
  if (nu_e <= q) {
    throw Error(ErrorCode::kDegreesOfFreedom, "error df " + std::to_string(nu_e) +
                                                  " must exceed q = " + std::to_string(q));
  }

  const std::vector<double> all = gen_eigvals(s_h, s_e);
  double total = 0.0;
  for (double v : all) total += v;
  const double zero = kZeroRootTol * (1.0 + total);

  const SmhParams smh = standard_smh(nu_h, nu_e, q);
  CriteriaValues cv;
  cv.s = std::min(nu_h, q);
  cv.m = smh.m;
  cv.h = smh.h;
  cv.nu_h = nu_h;
  cv.nu_e = nu_e;
  cv.q = q;

  cv.lambdas.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cv.s));
  for (double& v : cv.lambdas) {
    if (v < zero) v = 0.0;
    else ++cv.rank;
  }

  cv.wilks = 1.0;
  cv.pillai = 0.0;
  cv.lawley_hotelling = 0.0;
  cv.thetas.reserve(cv.s);
  for (double lambda : cv.lambdas) {
    const double theta = lambda / (1.0 + lambda);
    cv.thetas.push_back(theta);
    cv.wilks /= 1.0 + lambda;
    cv.pillai += theta;
    cv.lawley_hotelling += lambda;
  }
  cv.roy = cv.thetas.front();

  // The determinant sees every root, including any beyond s that rounding in
  // S_H left nonzero, so it is checked against the full spectrum.
  double full = 1.0;
  for (double lambda : all) full /= 1.0 + lambda;
  cv.wilks_determinant = std::exp(spd_logdet(s_e) - spd_logdet(add(s_e, s_h)));
  if (std::abs(cv.wilks_determinant - full) > kWilksRouteTol * full) {
    throw Error(ErrorCode::kNumeric,
                "Wilks lambda routes disagree: eigenvalues give " + std::to_string(full) +
                    ", determinants give " + std::to_string(cv.wilks_determinant));
  }
  return cv;
}

}  // namespace mslm
