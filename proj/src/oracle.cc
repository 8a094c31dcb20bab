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

// Reference path through the general linear model. Deliberately brute force:
// materializes the N x 2R design, the N x N residual projector and the
// (R-1) x 2R contrast matrix.

#include <cmath>

#include "mslm/error.h"
#include "mslm/hypothesis.h"

namespace mslm {

OracleMatrices oracle_build(std::span<const GroupSample> samples, const HypothesisSpec& spec) {
  const std::size_t r = samples.size();
  if (r < 2) throw Error(ErrorCode::kSampleSize, "oracle needs at least 2 groups");
  const std::size_t q = samples.front().y.cols();

  std::size_t total_n = 0;
  for (const GroupSample& s : samples) {
    if (s.y.cols() != q || s.y.rows() != s.x.size()) {
      throw Error(ErrorCode::kShape, "oracle: inconsistent group '" + s.label + "'");
    }
    total_n += s.x.size();
  }

  // Stacked responses and block-diagonal design [1 x_r] in columns 2r, 2r+1.
  Mat y(total_n, q);
  Mat x(total_n, 2 * r);
  std::size_t row = 0;
  for (std::size_t g = 0; g < r; ++g) {
    const GroupSample& s = samples[g];
    for (std::size_t i = 0; i < s.x.size(); ++i, ++row) {
      x(row, 2 * g) = 1.0;
      x(row, 2 * g + 1) = s.x[i];
      for (std::size_t j = 0; j < q; ++j) y(row, j) = s.y(i, j);
    }
  }

  // X'X is block diagonal; invert each 2x2 block in closed form.
  const Mat xtx = matmul(transpose(x), x);
  Mat xtx_inv(2 * r, 2 * r);
  for (std::size_t g = 0; g < r; ++g) {
    const std::size_t o = 2 * g;
    const double p = xtx(o, o), u = xtx(o, o + 1), v = xtx(o + 1, o), w = xtx(o + 1, o + 1);
    const double det = p * w - u * v;
    if (!(std::abs(det) > 1e-14 * p * w)) {
      throw Error(ErrorCode::kDegenerateDesign,
                  "oracle: singular design block for group '" + samples[g].label + "'");
    }
    xtx_inv(o, o) = w / det;
    xtx_inv(o, o + 1) = -u / det;
    xtx_inv(o + 1, o) = -v / det;
    xtx_inv(o + 1, o + 1) = p / det;
  }

  const Mat b_tilde = matmul(xtx_inv, matmul(transpose(x), y));  // 2R x q

  // Banded contrast: row k has (a, b) on group k and (-a, -b) on group k+1.
  const auto [a, b] = spec.coefficients();
  Mat c(r - 1, 2 * r);
  for (std::size_t k = 0; k + 1 < r; ++k) {
    c(k, 2 * k) = a;
    c(k, 2 * k + 1) = b;
    c(k, 2 * k + 2) = -a;
    c(k, 2 * k + 3) = -b;
  }

  const Mat cb = matmul(c, b_tilde);
  const Mat middle = matmul(matmul(c, xtx_inv), transpose(c));
  Mat middle_inv = Mat::identity(r - 1);
  try {
    middle_inv = spd_inverse(middle);
  } catch (const Error& e) {
    throw Error(ErrorCode::kDegenerateHypothesis,
                std::string("oracle: contrast covariance is singular: ") + e.what());
  }
  const Mat s_h = matmul(matmul(transpose(cb), middle_inv), cb);

  const Mat projector = subtract(Mat::identity(total_n), matmul(matmul(x, xtx_inv), transpose(x)));
  const Mat s_e = matmul(matmul(transpose(y), projector), y);

  return OracleMatrices{.s_h = s_h, .s_e = s_e};
}

}  // namespace mslm
