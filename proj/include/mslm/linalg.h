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

// Small dense linear algebra: just enough for q x q SSCP matrices and the
// stacked designs used by the oracle path. Everything is row-major double.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mslm {

class Mat {
 public:
  /// rows x cols of zeros. Both dimensions must be positive.
  Mat(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major entries; throws if the length is wrong or
  /// any entry is not finite.
  Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Mat identity(std::size_t n);
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Mat diagonal(std::span<const double> diag);
  static Mat column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  /// "RxC" for error messages.
  std::string shape() const;

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat add(const Mat& a, const Mat& b);
Mat subtract(const Mat& a, const Mat& b);
Mat scale(const Mat& a, double factor);
/// u v'.
Mat outer(std::span<const double> u, std::span<const double> v);

double frobenius_norm(const Mat& a);
double max_abs(const Mat& a);
double trace(const Mat& a);

/// Symmetric within 1e-10 * max|a| (and square).
bool is_symmetric(const Mat& a);
/// Checks is_symmetric and returns (a + a') / 2. Throws kShape otherwise.
Mat symmetrize(const Mat& a);

/// Lower-triangular L with a = L L'. Throws kShape for non-square or
/// asymmetric input and kNotPositiveDefinite (naming the pivot) otherwise.
Mat cholesky_spd(const Mat& a);
Mat spd_inverse(const Mat& a);
double spd_logdet(const Mat& a);

/// Solves L X = B for lower-triangular L.
Mat solve_lower(const Mat& lower, const Mat& b);

/// Cyclic Jacobi sweeps until the off-diagonal norm drops below
/// 1e-12 * ||a||_F. Gives up with kNumeric after kMaxJacobiSweeps.
inline constexpr int kMaxJacobiSweeps = 100;
std::vector<double> sym_eigvals(const Mat& a);

/// Eigenvalues of h * e^-1 for symmetric PSD h and SPD e, descending,
/// via the congruence L^-1 h L^-T with e = L L'. Small negative roots from
/// rounding are clamped to zero; materially negative ones throw kNumeric.
std::vector<double> gen_eigvals(const Mat& h, const Mat& e);

}  // namespace mslm
