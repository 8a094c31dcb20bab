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

#include "mslm/linalg.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "mslm/error.h"

namespace mslm {
namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kJacobiTol = 1e-12;
constexpr double kNegativeRootTol = 1e-10;

void require_square(const Mat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kShape,
                std::string(what) + ": expected a square matrix, got " + a.shape());
  }
}

void require_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kShape, std::string(what) + ": shape mismatch " + a.shape() +
                                       " vs " + b.shape());
  }
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::kShape, "matrix dimensions must be positive, got " + shape());
  }
  data_.assign(rows * cols, 0.0);
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::kShape, "matrix dimensions must be positive, got " + shape());
  }
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::kShape, "matrix " + shape() + " given " +
                                       std::to_string(data_.size()) + " entries");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::kNumeric, "non-finite matrix entry at (" +
                                           std::to_string(i / cols) + "," +
                                           std::to_string(i % cols) + ")");
    }
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw Error(ErrorCode::kShape, "ragged row list in Mat::from_rows");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Mat(r, c, std::move(entries));
}

Mat Mat::diagonal(std::span<const double> diag) {
  Mat m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Mat Mat::column(std::span<const double> values) {
  return Mat(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::string Mat::shape() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kShape,
                "matmul: cannot multiply " + a.shape() + " by " + b.shape());
  }
  Mat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Mat transpose(const Mat& a) {
  Mat out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Mat add(const Mat& a, const Mat& b) {
  require_same_shape(a, b, "add");
  Mat out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

Mat subtract(const Mat& a, const Mat& b) {
  require_same_shape(a, b, "subtract");
  Mat out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

Mat scale(const Mat& a, double factor) {
  Mat out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= factor;
  return out;
}

Mat outer(std::span<const double> u, std::span<const double> v) {
  Mat out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * v[j];
  return out;
}

double frobenius_norm(const Mat& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return std::sqrt(sum);
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double trace(const Mat& a) {
  require_square(a, "trace");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

bool is_symmetric(const Mat& a) {
  if (a.rows() != a.cols()) return false;
  const double tol = kSymmetryTol * max_abs(a);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

Mat symmetrize(const Mat& a) {
  require_square(a, "symmetrize");
  if (!is_symmetric(a)) {
    throw Error(ErrorCode::kShape, "matrix " + a.shape() + " is not symmetric");
  }
  Mat out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Mat cholesky_spd(const Mat& a) {
  const Mat s = symmetrize(a);
  const std::size_t n = s.rows();
  Mat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = s(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "matrix is not positive definite: non-positive pivot at index " +
                      std::to_string(j));
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

Mat solve_lower(const Mat& lower, const Mat& b) {
  require_square(lower, "solve_lower");
  if (lower.rows() != b.rows()) {
    throw Error(ErrorCode::kShape,
                "solve_lower: " + lower.shape() + " against " + b.shape());
  }
  const std::size_t n = lower.rows();
  Mat x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = x(i, c);
      for (std::size_t k = 0; k < i; ++k) v -= lower(i, k) * x(k, c);
      x(i, c) = v / lower(i, i);
    }
  }
  return x;
}

Mat spd_inverse(const Mat& a) {
  const Mat l = cholesky_spd(a);
  // A^-1 = L^-T L^-1.
  const Mat l_inv = solve_lower(l, Mat::identity(l.rows()));
  Mat inv = matmul(transpose(l_inv), l_inv);
  return symmetrize(inv);
}

double spd_logdet(const Mat& a) {
  const Mat l = cholesky_spd(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

std::vector<double> sym_eigvals(const Mat& a) {
  Mat m = symmetrize(a);
  const std::size_t n = m.rows();
  const double target = kJacobiTol * frobenius_norm(m);

  auto off_norm = [&m, n] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += m(i, j) * m(i, j);
    return std::sqrt(sum);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep++ == kMaxJacobiSweeps) {
      throw Error(ErrorCode::kNumeric, "Jacobi eigensolver did not converge after " +
                                           std::to_string(kMaxJacobiSweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing (p,q), in the stable tan form.
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

std::vector<double> gen_eigvals(const Mat& h, const Mat& e) {
  require_square(h, "gen_eigvals");
  require_same_shape(h, e, "gen_eigvals");
  const Mat hs = symmetrize(h);
  const Mat l = cholesky_spd(e);
  // W = L^-1 H, then L^-1 W' = L^-1 H L^-T.
  const Mat w = solve_lower(l, hs);
  const Mat reduced = solve_lower(l, transpose(w));

  // The reduction is symmetric only up to rounding; average it explicitly.
  Mat sym = reduced;
  for (std::size_t i = 0; i < sym.rows(); ++i) {
    for (std::size_t j = i + 1; j < sym.cols(); ++j) {
      const double v = 0.5 * (reduced(i, j) + reduced(j, i));
      sym(i, j) = v;
      sym(j, i) = v;
    }
  }

  std::vector<double> eig = sym_eigvals(sym);
  const double floor = -kNegativeRootTol * std::max(1.0, eig.empty() ? 0.0 : eig.front());
  for (double& v : eig) {
    if (v < floor) {
      throw Error(ErrorCode::kNumeric,
                  "hypothesis matrix has a materially negative generalized eigenvalue (" +
                      std::to_string(v) + ")");
    }
    if (v < 0.0) v = 0.0;
  }
  return eig;
}

}  // namespace mslm
