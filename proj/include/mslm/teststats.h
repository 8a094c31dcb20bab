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
#include <vector>

#include "mslm/linalg.h"

namespace mslm {

/// Shape parameters of the null distributions of the four criteria.
struct SmhParams {
  double s = 0.0;
  double m = 0.0;
  double h = 0.0;
};

/// s = min(nu_H, q), m = (|nu_H - q| - 1)/2, h = (nu_E - q - 1)/2.
SmhParams standard_smh(std::size_t nu_h, std::size_t nu_e, std::size_t q);

struct CriteriaValues {
  std::vector<double> lambdas;  // top-s roots of S_H S_E^-1, descending
  std::vector<double> thetas;   // lambda / (1 + lambda)
  double wilks = 1.0;           // prod 1/(1 + lambda_i)
  double wilks_determinant = 1.0;  // |S_E| / |S_E + S_H|, all q roots
  double roy = 0.0;                // theta_1
  double pillai = 0.0;             // sum theta_i
  double lawley_hotelling = 0.0;   // sum lambda_i
  std::size_t s = 0;
  double m = 0.0;
  double h = 0.0;
  std::size_t nu_h = 0;
  std::size_t nu_e = 0;
  std::size_t q = 0;
  std::size_t rank = 0;  // roots above the zero threshold
};

/// All four criteria for the pair (S_H, S_E). Throws kDegreesOfFreedom when
/// nu_E <= q or nu_H == 0, and kNumeric if the determinant and eigenvalue
/// routes to Wilks' lambda (over all q roots) disagree beyond 1e-9 relative.
CriteriaValues compute_criteria(const Mat& s_h, const Mat& s_e, std::size_t nu_h,
                                std::size_t nu_e);

}  // namespace mslm
