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

// Cross-group hypotheses of the form
//   H0: a*alpha_1 + b*beta_1 = ... = a*alpha_R + b*beta_R
// and the hypothesis SSCP matrix S_H they induce.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mslm/linalg.h"
#include "mslm/model.h"

namespace mslm {

enum class HypothesisKind { kCommonIntercept, kParallelism, kConcurrentAt, kLinear };

struct LinearCoefficients {
  double a = 0.0;
  double b = 0.0;
};

class HypothesisSpec {
 public:
  static HypothesisSpec common_intercept();
  static HypothesisSpec parallelism();
  static HypothesisSpec concurrent_at(double x0);
  /// Throws kParameter for (0, 0).
  static HypothesisSpec linear(double a, double b);

  /// Accepts "parallelism", "intercept", "concurrent:<x0>", "linear:<a>,<b>".
  static HypothesisSpec parse(std::string_view text);

  HypothesisKind kind() const noexcept { return kind_; }
  /// Only meaningful for kConcurrentAt.
  double x0() const noexcept { return x0_; }
  LinearCoefficients coefficients() const noexcept { return coef_; }

  /// Round-trips through parse().
  std::string to_string() const;
  /// Human statement of H0, e.g. "beta_1 = beta_2 = ... = beta_R".
  std::string describe() const;

 private:
  HypothesisSpec(HypothesisKind kind, LinearCoefficients coef, double x0)
      : kind_(kind), coef_(coef), x0_(x0) {}

  HypothesisKind kind_;
  LinearCoefficients coef_;
  double x0_;
};

struct HypothesisMatrices {
  Mat z;                        // R x q, row r = a*alpha_r' + b*beta_r'
  std::vector<double> weights;  // d_rr, all > 0
  Mat s_h;                      // q x q
  std::size_t nu_h = 0;         // R - 1
};

/// d_rr = n_r * sxx_r / ||a x_r - b 1||^2, the precision of a*alpha_r + b*beta_r
/// relative to Sigma. Throws kDegenerateHypothesis if the denominator is zero.
double weight(const FittedGroup& fit, double a, double b);

/// S_H as the weighted between-groups SSCP of the rows of Z:
///   sum_r d_r z_r z_r' - (sum_r d_r z_r)(sum_r d_r z_r)' / sum_r d_r.
HypothesisMatrices build(const ModelSet& models, const HypothesisSpec& spec);

struct OracleMatrices {
  Mat s_h;
  Mat s_e;
};

/// Independent reference computation from the general linear model
/// C B M = 0: stacks all groups into one block-diagonal design, inverts the
/// 2x2 blocks of X'X explicitly and forms the banded contrast matrix C.
/// Shares no code with fit_group/pool/build beyond the Mat primitives.
OracleMatrices oracle_build(std::span<const GroupSample> samples,
                            const HypothesisSpec& spec);

}  // namespace mslm
