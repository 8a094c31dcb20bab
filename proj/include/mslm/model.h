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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mslm/linalg.h"

namespace mslm {

/// Raw data for one group: a scalar predictor and q responses per row.
struct GroupSample {
  std::string label;
  std::vector<double> x;
  Mat y;  // n x q
};

/// Least-squares fit of Y = 1 alpha' + x beta' + E for a single group.
/// Keeps the x summaries that the hypothesis weights need so nothing
/// downstream has to touch the raw sample again.
struct FittedGroup {
  std::string label;
  std::vector<double> alpha_hat;  // q intercepts
  std::vector<double> beta_hat;   // q slopes
  Mat resid_sscp;                 // q x q, Y'(I - X X^-)Y
  std::size_t n = 0;
  double x_bar = 0.0;
  double sxx = 0.0;       // ||(I - 11'/n) x||^2
  double x_norm_sq = 0.0;  // ||x||^2
  double x_sum = 0.0;      // 1'x

  std::size_t q() const noexcept { return alpha_hat.size(); }
};

struct ModelSet {
  std::vector<FittedGroup> groups;  // ingestion order
  std::size_t q = 0;
  std::size_t total_n = 0;  // N
  std::size_t nu_e = 0;     // N - 2R
  Mat pooled_se;            // sum of per-group residual SSCP, checked SPD

  std::size_t num_groups() const noexcept { return groups.size(); }
};

/// Throws kSampleSize when n <= q + 2 (or n <= 2), kDegenerateDesign when x
/// is constant, kShape when x and Y disagree on n.
FittedGroup fit_group(const GroupSample& sample);

/// Sums residual SSCPs into S_E with nu_E = N - 2R and verifies S_E is
/// positive definite before returning.
ModelSet pool(std::vector<FittedGroup> groups);

ModelSet fit_all(std::span<const GroupSample> samples);

}  // namespace mslm
